use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (relative asymmetry {asymmetry:.3e})")]
    NotHermitian { asymmetry: f64 },
    #[error("{routine} did not converge within {sweeps} sweeps")]
    NoConvergence { routine: &'static str, sweeps: usize },
    #[error("dimension mismatch: expected {expected:?}, got {got:?}")]
    DimensionMismatch {
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("invalid matrix shape {rows}x{cols} for {len} entries")]
    InvalidShape { rows: usize, cols: usize, len: usize },
    #[error("eigenvalue {value} lies outside the domain [{lo}, {hi}] of {name}")]
    DomainViolation {
        name: String,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("invalid Schatten exponent {0} (need p >= 1 or inf)")]
    BadExponent(f64),
    #[error("invalid norm parameter: {0}")]
    BadParameter(String),
    #[error("unknown norm `{0}`")]
    UnknownNorm(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("columns are numerically rank deficient after {attempts} attempts")]
    RankDeficient { attempts: usize },
    #[error("blocks do not form an isometry tuple (residual {residual:.3e})")]
    NotAnIsometry { residual: f64 },
    #[error("projections do not form a resolution of the identity: {0}")]
    NotAResolution(String),
    #[error("matrix is not an orthoprojection (residual {residual:.3e})")]
    NotAProjection { residual: f64 },
    #[error("norm `{norm}` is not weakly unitarily invariant (deviation {deviation:.3e})")]
    NotWeaklyInvariant { norm: String, deviation: f64 },
    #[error("psi(Y) is numerically singular (smallest eigenvalue {min_eig:.3e})")]
    SingularPsi { min_eig: f64 },
    #[error("norm `{0}` is claimed neither M nor L")]
    UnclaimedNorm(String),
    #[error("consistency check failed: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
