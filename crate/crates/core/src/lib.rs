//! Numerical toolkit for norms on `M_n` with C*-convex unit balls (M-norms)
//! and their duals (L-norms).
//!
//! The modules build on each other: [`matcore`] provides the dense kernel,
//! [`norms`] the evaluable catalog, [`tuples`] the isometry tuples that
//! quantify the defining inequalities, [`certify`] the refutation search,
//! [`extremal`] the `(u)`-norm optimizer and [`lmi`] the block-matrix
//! membership tests.

pub mod certify;
pub mod error;
pub mod extremal;
pub mod lmi;
pub mod matcore;
pub mod norms;
pub mod rng;
pub mod tuples;

pub use certify::{Certificate, Property, Verdict};
pub use error::{Error, Result};
pub use extremal::UNormResult;
pub use lmi::{ConcaveFn, FeasibilityResult};
pub use matcore::{ComplexMatrix, HermitianEig, PolarDecomposition};
pub use norms::{DualEvalResult, NormClass, NormKind, NormSpec};
pub use tuples::IsometryTuple;
