use num_complex::Complex64;

use super::eigen::{jacobi_rotation, rotate_columns};
use super::{ComplexMatrix, MAX_SWEEPS};
use crate::error::{Error, Result};

/// `A = U diag(s) V*` with `s` descending and nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub singular_values: Vec<f64>,
    pub v: ComplexMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.u.rows();
        let us = ComplexMatrix::from_fn(n, n, |i, j| self.u[(i, j)] * self.singular_values[j]);
        &us * &self.v.adjoint()
    }
}

/// `A = U |A|` with `U` unitary and `|A| = (A*A)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarDecomposition {
    pub unitary_factor: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

fn column_dot(m: &ComplexMatrix, p: usize, q: usize) -> Complex64 {
    (0..m.rows()).map(|r| m[(r, p)].conj() * m[(r, q)]).sum()
}

fn column_norm_sqr(m: &ComplexMatrix, p: usize) -> f64 {
    (0..m.rows()).map(|r| m[(r, p)].norm_sqr()).sum()
}

/// Extends orthonormal `columns` to a full orthonormal basis of `C^n`. Candidates
/// are the standard basis vectors; the largest residual wins, ties to the lowest index.
pub(crate) fn complete_basis(columns: &mut Vec<Vec<Complex64>>, n: usize) {
    while columns.len() < n {
        let mut best: Option<(f64, Vec<Complex64>)> = None;
        for e in 0..n {
            let mut v = vec![Complex64::new(0.0, 0.0); n];
            v[e] = Complex64::new(1.0, 0.0);
            for _ in 0..2 {
                for c in columns.iter() {
                    let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ci) in v.iter_mut().zip(c) {
                        *vi -= proj * ci;
                    }
                }
            }
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, v));
            }
        }
        let (norm, v) = best.expect("n >= 1");
        columns.push(v.into_iter().map(|z| z / norm).collect());
    }
}

/// Singular value decomposition of a square matrix (one-sided Hestenes–Jacobi).
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.dim()?;
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = column_norm_sqr(&w, p);
                let beta = column_norm_sqr(&w, q);
                let gamma = column_dot(&w, p, q);
                if alpha == 0.0 || beta == 0.0 || gamma.norm() <= 1e-15 * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let g = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut w, p, q, g);
                rotate_columns(&mut v, p, q, g);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "svd",
                sweeps,
            });
        }
    }

    let norms: Vec<f64> = (0..n).map(|j| column_norm_sqr(&w, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));
    let s_max = norms[order[0]];

    let mut singular_values = Vec::with_capacity(n);
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut v_sorted = ComplexMatrix::zeros(n, n);
    let mut rank = 0;
    for (j, &src) in order.iter().enumerate() {
        let s = norms[src];
        v_sorted.set_column(j, &v.column(src));
        if s > 0.0 && s > 1e-13 * s_max {
            u_cols.push(w.column(src).into_iter().map(|z| z / s).collect());
            singular_values.push(s);
            rank += 1;
        } else {
            singular_values.push(s);
        }
    }
    // Null directions of A get an arbitrary but deterministic completion.
    complete_basis(&mut u_cols, n);
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, col) in u_cols.iter().enumerate() {
        u.set_column(j, col);
    }
    debug_assert!(rank <= n);
    Ok(Svd {
        u,
        singular_values,
        v: v_sorted,
    })
}

/// Polar decomposition `A = U|A|` through the SVD: `U = W V*`, `|A| = V Σ V*`.
pub fn polar(a: &ComplexMatrix) -> Result<PolarDecomposition> {
    let d = svd(a)?;
    let unitary_factor = &d.u * &d.v.adjoint();
    let n = d.v.rows();
    let vs = ComplexMatrix::from_fn(n, n, |i, j| d.v[(i, j)] * d.singular_values[j]);
    let modulus = (&vs * &d.v.adjoint()).hermitian_part();
    Ok(PolarDecomposition {
        unitary_factor,
        modulus,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{is_psd, EIG_TOL};
    use crate::rng;

    fn unitarity(u: &ComplexMatrix) -> f64 {
        let n = u.rows();
        (&(&u.adjoint() * u) - &ComplexMatrix::identity(n)).frobenius_norm()
    }

    #[test]
    fn zero_unitary_and_signed_diagonal() {
        let z = svd(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(z.singular_values, vec![0.0; 3]);
        assert!(unitarity(&z.u) < 1e-14);

        let mut r = rng::seeded(5);
        let w = rng::unitary_matrix(&mut r, 4);
        let s = svd(&w).unwrap();
        assert!(s.singular_values.iter().all(|x| (x - 1.0).abs() < 1e-12));

        let d = svd(&ComplexMatrix::from_real_diag(&[2.0, -1.0])).unwrap();
        assert_eq!(d.singular_values, vec![2.0, 1.0]);
    }

    #[test]
    fn random_reconstruction_and_order() {
        let mut r = rng::seeded(6);
        for trial in 0..200 {
            let n = 1 + trial % 6;
            let a = rng::gaussian_matrix(&mut r, n, n);
            let d = svd(&a).unwrap();
            let scale = a.frobenius_norm().max(1.0);
            assert!((&d.reconstruct() - &a).frobenius_norm() / scale < 1e-12);
            assert!(unitarity(&d.u) < EIG_TOL && unitarity(&d.v) < EIG_TOL);
            assert!(d.singular_values.windows(2).all(|w| w[0] >= w[1]));
            assert!(d.singular_values.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn rank_deficient_input() {
        let u = vec![Complex64::new(1.0, 1.0), Complex64::new(0.0, 2.0), Complex64::new(-1.0, 0.0)];
        let v = vec![Complex64::new(0.5, 0.0), Complex64::new(1.0, -1.0), Complex64::new(0.0, 0.0)];
        let a = ComplexMatrix::outer(&u, &v);
        let d = svd(&a).unwrap();
        assert!(d.singular_values[1] < 1e-12);
        assert!(unitarity(&d.u) < 1e-12);
        assert!((&d.reconstruct() - &a).frobenius_norm() < 1e-12);
    }

    #[test]
    fn polar_examples() {
        // direct multiplication: diag(1,−1)·diag(2,1) = diag(2,−1)
        let p = polar(&ComplexMatrix::from_real_diag(&[2.0, -1.0])).unwrap();
        assert!((&p.unitary_factor - &ComplexMatrix::from_real_diag(&[1.0, -1.0])).frobenius_norm() < 1e-14);
        assert!((&p.modulus - &ComplexMatrix::from_real_diag(&[2.0, 1.0])).frobenius_norm() < 1e-14);

        let mut r = rng::seeded(8);
        let w = rng::unitary_matrix(&mut r, 3);
        let p = polar(&w).unwrap();
        assert!((&p.unitary_factor - &w).frobenius_norm() < 1e-12);
        assert!((&p.modulus - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-12);

        let g = rng::gaussian_matrix(&mut r, 3, 3);
        let psd = &g * &g.adjoint();
        let p = polar(&psd).unwrap();
        assert!((&p.unitary_factor - &ComplexMatrix::identity(3)).frobenius_norm() < 1e-10);
        assert!((&p.modulus - &psd).frobenius_norm() < 1e-10);
    }

    #[test]
    fn polar_random_consistency() {
        let mut r = rng::seeded(9);
        for trial in 0..200 {
            let n = 1 + trial % 6;
            let a = rng::gaussian_matrix(&mut r, n, n);
            let p = polar(&a).unwrap();
            let scale = a.frobenius_norm().max(1.0);
            assert!((&(&p.unitary_factor * &p.modulus) - &a).frobenius_norm() / scale < 1e-10);
            assert!(unitarity(&p.unitary_factor) < EIG_TOL);
            assert!(is_psd(&p.modulus, EIG_TOL).unwrap());
        }
    }

    #[test]
    fn singular_polar_is_still_unitary() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let p = polar(&a).unwrap();
        assert!(unitarity(&p.unitary_factor) < 1e-14);
        assert!((&(&p.unitary_factor * &p.modulus) - &a).frobenius_norm() < 1e-14);
    }
}
