use num_complex::Complex64;

use super::{ComplexMatrix, HERM_TOL, MAX_SWEEPS};
use crate::error::{Error, Result};

/// Spectral decomposition `H = Q diag(λ) Q*` with ascending eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEig {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors.
    pub fn eigenvectors(&self) -> &ComplexMatrix {
        &self.eigenvectors
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }

    /// Spectral radius, equal to the operator norm of the Hermitian input.
    pub fn spectral_radius(&self) -> f64 {
        self.min().abs().max(self.max().abs())
    }

    /// `Q diag(f(λ)) Q*`.
    pub fn map_spectrum(&self, mut f: impl FnMut(f64) -> f64) -> ComplexMatrix {
        let q = &self.eigenvectors;
        let n = q.rows();
        let fl: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| q[(i, k)] * fl[k] * q[(j, k)].conj()).sum()
        });
        // exact Hermitian symmetry of the result
        for i in 0..n {
            out[(i, i)] = Complex64::new(out[(i, i)].re, 0.0);
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }
}

/// Rotation `G = [[c, s], [-s·conj(u), c·conj(u)]]` with `G* [[a, b], [b̄, d]] G` diagonal.
/// Returned as `(G_pp, G_pq, G_qp, G_qq)`.
pub(crate) fn jacobi_rotation(
    a: f64,
    d: f64,
    b: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let r = b.norm();
    let u_conj = if r > 0.0 { (b / r).conj() } else { Complex64::new(1.0, 0.0) };
    let theta = 0.5 * (2.0 * r).atan2(d - a);
    let (s, c) = theta.sin_cos();
    (
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        -u_conj * s,
        u_conj * c,
    )
}

/// Right-multiply columns `p`, `q` of `m` by the 2×2 rotation.
pub(crate) fn rotate_columns(
    m: &mut ComplexMatrix,
    p: usize,
    q: usize,
    g: (Complex64, Complex64, Complex64, Complex64),
) {
    let (gpp, gpq, gqp, gqq) = g;
    for r in 0..m.rows() {
        let mp = m[(r, p)];
        let mq = m[(r, q)];
        m[(r, p)] = mp * gpp + mq * gqp;
        m[(r, q)] = mp * gpq + mq * gqq;
    }
}

fn rotate_rows_adjoint(
    m: &mut ComplexMatrix,
    p: usize,
    q: usize,
    g: (Complex64, Complex64, Complex64, Complex64),
) {
    let (gpp, gpq, gqp, gqq) = g;
    for c in 0..m.cols() {
        let mp = m[(p, c)];
        let mq = m[(q, c)];
        m[(p, c)] = gpp.conj() * mp + gqp.conj() * mq;
        m[(q, c)] = gpq.conj() * mp + gqq.conj() * mq;
    }
}

fn off_diagonal_norm(m: &ComplexMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn eigh(h: &ComplexMatrix) -> Result<HermitianEig> {
    let n = h.dim()?;
    let asymmetry = h.hermitian_asymmetry();
    if asymmetry > HERM_TOL {
        return Err(Error::NotHermitian { asymmetry });
    }
    let mut a = h.hermitian_part();
    let mut q = ComplexMatrix::identity(n);
    let threshold = 1e-13 * a.frobenius_norm();

    let mut converged = off_diagonal_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                routine: "eigh",
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n - 1 {
            for r in p + 1..n {
                let b = a[(p, r)];
                if b.norm() == 0.0 {
                    continue;
                }
                let g = jacobi_rotation(a[(p, p)].re, a[(r, r)].re, b);
                rotate_columns(&mut a, p, r, g);
                rotate_rows_adjoint(&mut a, p, r, g);
                a[(p, r)] = Complex64::new(0.0, 0.0);
                a[(r, p)] = Complex64::new(0.0, 0.0);
                a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
                a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
                rotate_columns(&mut q, p, r, g);
            }
        }
        converged = off_diagonal_norm(&a) <= threshold;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |i, j| q[(i, order[j])]);
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}
