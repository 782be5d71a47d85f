//! Dense complex matrix kernel.
//!
//! Everything downstream is built on [`ComplexMatrix`], the Hermitian
//! eigensolver [`eigh`] (cyclic complex Jacobi), the one-sided Jacobi [`svd`]
//! and the [`polar`] decomposition derived from it.

mod eigen;
mod funcs;
mod matrix;
mod svd;

pub use eigen::{eigh, HermitianEig};
pub use funcs::{apply_fn, apply_fn_on, is_psd, min_eigenvalue, orthonormalize_columns, Domain};
pub use matrix::ComplexMatrix;
pub use svd::{polar, svd, PolarDecomposition, Svd};

/// Relative asymmetry accepted as Hermitian.
pub const HERM_TOL: f64 = 1e-10;
/// Residual tolerance for decompositions.
pub const EIG_TOL: f64 = 1e-9;
/// Slack allowed outside a function's domain before clamping is refused.
pub const CLAMP_EPS: f64 = 1e-9;
/// Jacobi sweep budget.
pub const MAX_SWEEPS: usize = 100;
