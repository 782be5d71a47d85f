use num_complex::Complex64;

use super::{eigh, ComplexMatrix, CLAMP_EPS};
use crate::error::{Error, Result};

/// Where a scalar function may be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Real,
    /// `[lo, hi]`; eigenvalues within `CLAMP_EPS` outside are clamped onto the ends.
    Closed { lo: f64, hi: f64 },
    /// `(lo, hi)`; eigenvalues are clamped into `[lo + CLAMP_EPS, hi − CLAMP_EPS]`.
    Open { lo: f64, hi: f64 },
}

impl Domain {
    pub const UNIT_OPEN: Domain = Domain::Open { lo: 0.0, hi: 1.0 };

    /// Clamped evaluation point, or `None` when `t` is too far outside.
    pub fn clamp(&self, t: f64) -> Option<f64> {
        match *self {
            Domain::Real => Some(t),
            Domain::Closed { lo, hi } => {
                (t >= lo - CLAMP_EPS && t <= hi + CLAMP_EPS).then(|| t.clamp(lo, hi))
            }
            Domain::Open { lo, hi } => (t >= lo - CLAMP_EPS && t <= hi + CLAMP_EPS)
                .then(|| t.clamp(lo + CLAMP_EPS, hi - CLAMP_EPS)),
        }
    }

    fn bounds(&self) -> (f64, f64) {
        match *self {
            Domain::Real => (f64::NEG_INFINITY, f64::INFINITY),
            Domain::Closed { lo, hi } | Domain::Open { lo, hi } => (lo, hi),
        }
    }
}

/// True iff the smallest eigenvalue is at least `−tol·max(1, ‖H‖_∞)`.
pub fn is_psd(h: &ComplexMatrix, tol: f64) -> Result<bool> {
    let e = eigh(h)?;
    Ok(e.min() >= -tol * e.spectral_radius().max(1.0))
}

pub fn min_eigenvalue(h: &ComplexMatrix) -> Result<f64> {
    Ok(eigh(h)?.min())
}

/// Spectral calculus `f(H) = Q diag(f(λ)) Q*` on the whole real line.
pub fn apply_fn(h: &ComplexMatrix, f: impl Fn(f64) -> f64) -> Result<ComplexMatrix> {
    apply_fn_on(h, f, Domain::Real)
}

/// Spectral calculus with the spectrum clamped into `domain`.
pub fn apply_fn_on(
    h: &ComplexMatrix,
    f: impl Fn(f64) -> f64,
    domain: Domain,
) -> Result<ComplexMatrix> {
    let e = eigh(h)?;
    let mut clamped = Vec::with_capacity(e.eigenvalues().len());
    for &l in e.eigenvalues() {
        match domain.clamp(l) {
            Some(t) => clamped.push(t),
            None => {
                let (lo, hi) = domain.bounds();
                return Err(Error::DomainViolation {
                    name: "matrix function".into(),
                    value: l,
                    lo,
                    hi,
                });
            }
        }
    }
    let mut k = 0;
    Ok(e.map_spectrum(|_| {
        let v = f(clamped[k]);
        k += 1;
        v
    }))
}

/// Modified Gram–Schmidt with one reorthogonalization pass on the columns of `m`
/// (`rows >= cols`).
pub fn orthonormalize_columns(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (rows, cols) = m.shape();
    if rows < cols {
        return Err(Error::DimensionMismatch {
            expected: (cols, cols),
            got: (rows, cols),
        });
    }
    let mut q: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    for j in 0..cols {
        let mut v = m.column(j);
        let original = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for c in &q {
                let proj: Complex64 = c.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, ci) in v.iter_mut().zip(c) {
                    *vi -= proj * ci;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if original == 0.0 || norm <= 1e-10 * original {
            return Err(Error::RankDeficient { attempts: 1 });
        }
        q.push(v.into_iter().map(|z| z / norm).collect());
    }
    let mut out = ComplexMatrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        out.set_column(j, col);
    }
    Ok(out)
}
