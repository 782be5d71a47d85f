//! Seeded randomness and random matrix ensembles.
//!
//! Every random quantity in the crate is drawn from a [`ChaCha8Rng`] built from
//! a `u64` seed. [`stream_seed`] derives independent seeds for named streams so
//! that adding a new consumer never shifts the draws of an existing one.

use num_complex::Complex64;
pub use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::matcore::{self, ComplexMatrix};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for the stream `name` under the master `seed`.
pub fn stream_seed(seed: u64, name: &str) -> u64 {
    // FNV-1a over the name, then mixed with the master seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(seed ^ splitmix64(h))
}

/// Seed for the `index`-th substream of `seed` (restarts, samples, starts).
pub fn substream(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(splitmix64(index.wrapping_add(1))))
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Random Hermitian matrix (GUE-like).
pub fn hermitian_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + &g.adjoint()).scale_real(0.5)
}

/// Haar-distributed unitary from orthonormalized Gaussian columns.
pub fn unitary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = gaussian_matrix(rng, n, n);
        if let Ok(q) = matcore::orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Unit vector in `C^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    loop {
        let v: Vec<Complex64> = (0..n).map(|_| complex_normal(rng)).collect();
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return v.into_iter().map(|z| z / norm).collect();
        }
    }
}

/// Hermitian matrix with eigenvalues drawn uniformly from `(lo, hi)` in a Haar basis.
pub fn hermitian_with_spectrum_in<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    lo: f64,
    hi: f64,
) -> ComplexMatrix {
    let u = unitary_matrix(rng, n);
    let eig: Vec<f64> = (0..n).map(|_| rng.random_range(lo..hi)).collect();
    let d = ComplexMatrix::from_real_diag(&eig);
    &(&u * &d) * &u.adjoint()
}

/// Random normal matrix `U D U*` with complex Gaussian diagonal `D`.
/// With `hermitian` the diagonal is real.
pub fn normal_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize, hermitian: bool) -> ComplexMatrix {
    let u = unitary_matrix(rng, n);
    let diag: Vec<Complex64> = (0..n)
        .map(|_| {
            let z = complex_normal(rng);
            if hermitian {
                Complex64::new(z.re * std::f64::consts::SQRT_2, 0.0)
            } else {
                z
            }
        })
        .collect();
    let d = ComplexMatrix::from_diag(&diag);
    &(&u * &d) * &u.adjoint()
}

/// Orthoprojection of random rank in `1..=n`, built by cutting the spectrum of
/// a random Hermitian matrix.
pub fn orthoprojection<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Result<ComplexMatrix> {
    let rank = rng.random_range(1..=n);
    let h = hermitian_matrix(rng, n);
    let eig = matcore::eigh(&h)?;
    let q = eig.eigenvectors();
    let mut p = ComplexMatrix::zeros(n, n);
    for j in (n - rank)..n {
        let col = q.column(j);
        p = &p + &ComplexMatrix::outer(&col, &col);
    }
    Ok(p.hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_stable_and_distinct() {
        assert_eq!(stream_seed(1, "a"), stream_seed(1, "a"));
        assert_ne!(stream_seed(1, "a"), stream_seed(1, "b"));
        assert_ne!(stream_seed(1, "a"), stream_seed(2, "a"));
        assert_ne!(substream(5, 0), substream(5, 1));
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded(3);
        let u = unitary_matrix(&mut rng, 5);
        let r = &(&u.adjoint() * &u) - &ComplexMatrix::identity(5);
        assert!(r.frobenius_norm() < 1e-12);
    }

    #[test]
    fn projection_is_idempotent() {
        let mut rng = seeded(4);
        for _ in 0..20 {
            let p = orthoprojection(&mut rng, 4).unwrap();
            assert!((&(&p * &p) - &p).frobenius_norm() < 1e-10);
        }
    }
}
