//! Isometry tuples `(C_1, …, C_k)` with `Σ C_i* C_i = I`.
//!
//! A tuple is stored as its `k` blocks; stacking them vertically gives a
//! `kn × n` matrix with orthonormal columns, which is how tuples are sampled
//! and perturbed.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{eigh, orthonormalize_columns, polar, ComplexMatrix};
use crate::norms::op_norm;
use crate::rng;

/// Accepted `‖Σ C_i* C_i − I‖_∞`.
pub const TUPLE_TOL: f64 = 1e-10;
/// Tolerance on resolutions of the identity passed to [`pinching_tuple`].
pub const RESOLUTION_TOL: f64 = 1e-9;
const MAX_RESAMPLES: usize = 8;
/// Eigenvalues of `Re U*` closer than this are treated as one cluster.
const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TupleRepr", into = "TupleRepr")]
pub struct IsometryTuple {
    n: usize,
    blocks: Vec<ComplexMatrix>,
}

#[derive(Serialize, Deserialize)]
struct TupleRepr {
    n: usize,
    k: usize,
    blocks: Vec<ComplexMatrix>,
}

impl TryFrom<TupleRepr> for IsometryTuple {
    type Error = Error;

    fn try_from(r: TupleRepr) -> Result<Self> {
        if r.blocks.len() != r.k {
            return Err(Error::Parse(format!("k = {} but {} blocks", r.k, r.blocks.len())));
        }
        let t = IsometryTuple::new(r.blocks)?;
        if t.n != r.n {
            return Err(Error::Parse(format!("n = {} but blocks are {}x{}", r.n, t.n, t.n)));
        }
        Ok(t)
    }
}

impl From<IsometryTuple> for TupleRepr {
    fn from(t: IsometryTuple) -> Self {
        TupleRepr {
            n: t.n,
            k: t.blocks.len(),
            blocks: t.blocks,
        }
    }
}

impl IsometryTuple {
    /// Validates `Σ C_i* C_i = I` within [`TUPLE_TOL`].
    pub fn new(blocks: Vec<ComplexMatrix>) -> Result<Self> {
        let first = blocks.first().ok_or_else(|| Error::BadParameter("empty tuple".into()))?;
        let n = first.dim()?;
        for b in &blocks {
            if b.shape() != (n, n) {
                return Err(Error::DimensionMismatch {
                    expected: (n, n),
                    got: b.shape(),
                });
            }
        }
        let t = Self { n, blocks };
        let residual = t.residual()?;
        if !(residual <= TUPLE_TOL) {
            return Err(Error::NotAnIsometry { residual });
        }
        Ok(t)
    }

    /// Splits a `kn × n` matrix into `k` stacked blocks and validates them.
    pub fn from_stacked(n: usize, stacked: &ComplexMatrix) -> Result<Self> {
        if n == 0 || stacked.cols() != n || stacked.rows() % n != 0 {
            return Err(Error::InvalidShape {
                rows: stacked.rows(),
                cols: stacked.cols(),
                len: n,
            });
        }
        let k = stacked.rows() / n;
        Self::new((0..k).map(|i| stacked.row_block(i * n, n)).collect())
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n,
            blocks: vec![ComplexMatrix::identity(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[ComplexMatrix] {
        &self.blocks
    }

    pub fn stacked(&self) -> ComplexMatrix {
        ComplexMatrix::vstack(&self.blocks).expect("blocks share a shape")
    }

    /// `‖Σ C_i* C_i − I‖_∞`.
    pub fn residual(&self) -> Result<f64> {
        let mut sum = ComplexMatrix::identity(self.n).scale_real(-1.0);
        for c in &self.blocks {
            sum = &sum + &(&c.adjoint() * c);
        }
        op_norm(&sum)
    }

    /// `Σ C_i* X_i C_i`.
    pub fn combine(&self, xs: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        if xs.len() != self.k() {
            return Err(Error::DimensionMismatch {
                expected: (self.k(), 1),
                got: (xs.len(), 1),
            });
        }
        let mut sum = ComplexMatrix::zeros(self.n, self.n);
        for (c, x) in self.blocks.iter().zip(xs) {
            if x.shape() != (self.n, self.n) {
                return Err(Error::DimensionMismatch {
                    expected: (self.n, self.n),
                    got: x.shape(),
                });
            }
            sum = &sum + &x.congruence(c);
        }
        Ok(sum)
    }

    /// The compressions `C_i X C_i*`.
    pub fn compressions(&self, x: &ComplexMatrix) -> Result<Vec<ComplexMatrix>> {
        if x.shape() != (self.n, self.n) {
            return Err(Error::DimensionMismatch {
                expected: (self.n, self.n),
                got: x.shape(),
            });
        }
        Ok(self.blocks.iter().map(|c| x.congruence(&c.adjoint())).collect())
    }
}

/// Blocks of a random `kn × n` isometry obtained by orthonormalizing a complex
/// Gaussian matrix.
pub fn random_tuple(n: usize, k: usize, seed: u64) -> Result<IsometryTuple> {
    if n == 0 || k == 0 {
        return Err(Error::BadParameter(format!("tuple shape n = {n}, k = {k}")));
    }
    let mut r = rng::seeded(seed);
    for _ in 0..MAX_RESAMPLES {
        let g = rng::gaussian_matrix(&mut r, k * n, n);
        match orthonormalize_columns(&g) {
            Ok(q) => return IsometryTuple::from_stacked(n, &q),
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RankDeficient {
        attempts: MAX_RESAMPLES,
    })
}

/// Tuple of the orthoprojections of a resolution of the identity.
pub fn pinching_tuple(projections: &[ComplexMatrix]) -> Result<IsometryTuple> {
    let first = projections
        .first()
        .ok_or_else(|| Error::NotAResolution("no projections".into()))?;
    let n = first.dim()?;
    let mut sum = ComplexMatrix::identity(n).scale_real(-1.0);
    for (i, p) in projections.iter().enumerate() {
        if p.shape() != (n, n) {
            return Err(Error::NotAResolution(format!("block {i} has shape {:?}", p.shape())));
        }
        if op_norm(&(p - &p.adjoint()))? > RESOLUTION_TOL {
            return Err(Error::NotAResolution(format!("block {i} is not Hermitian")));
        }
        if op_norm(&(&(p * p) - p))? > RESOLUTION_TOL {
            return Err(Error::NotAResolution(format!("block {i} is not idempotent")));
        }
        for (j, q) in projections.iter().enumerate().skip(i + 1) {
            if op_norm(&(p * q))? > RESOLUTION_TOL {
                return Err(Error::NotAResolution(format!("blocks {i} and {j} overlap")));
            }
        }
        sum = &sum + p;
    }
    if op_norm(&sum)? > RESOLUTION_TOL {
        return Err(Error::NotAResolution("projections do not sum to I".into()));
    }
    IsometryTuple::new(projections.to_vec())
}

/// Rank-one pinching tuple `(x_1x_1*, …, x_nx_n*)` of the columns of `q`.
pub fn basis_pinching(q: &ComplexMatrix) -> Result<IsometryTuple> {
    let n = q.dim()?;
    let blocks = (0..n)
        .map(|j| {
            let x = q.column(j);
            ComplexMatrix::outer(&x, &x)
        })
        .collect();
    IsometryTuple::new(blocks)
}

/// Rank-one pinching along an eigenbasis of `U*`, where `A = U|A|`.
///
/// With `U* = Σ e^{iθ_j} x_j x_j*` the phases satisfy
/// `Σ e^{iθ_j} ⟨x_j, A x_j⟩ = Tr(U*A) = ‖A‖_1`. The eigenbasis is computed
/// from the commuting Hermitian pair `Re U*`, `Im U*`: clusters of `Re U*`
/// eigenvalues are split by diagonalizing `Im U*` inside each cluster.
/// Projections are ordered by descending `cos θ_j`.
pub fn polar_pinching_tuple(a: &ComplexMatrix) -> Result<(IsometryTuple, Vec<Complex64>)> {
    let n = a.dim()?;
    let u_star = polar(a)?.unitary_factor.adjoint();
    let re = u_star.hermitian_part();
    let im = (&u_star - &u_star.adjoint()).scale(Complex64::new(0.0, -0.5));
    let eig = eigh(&re)?;
    let values = eig.eigenvalues();
    let q = eig.eigenvectors();

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut end = n;
    while end > 0 {
        let mut start = end - 1;
        while start > 0 && values[end - 1] - values[start - 1] <= CLUSTER_TOL {
            start -= 1;
        }
        let cols: Vec<Vec<Complex64>> = (start..end).map(|j| q.column(j)).collect();
        if cols.len() == 1 {
            basis.push(cols.into_iter().next().unwrap());
        } else {
            let m = cols.len();
            let v = ComplexMatrix::from_fn(n, m, |i, j| cols[j][i]);
            let restricted = im.congruence(&v).hermitian_part();
            let inner = eigh(&restricted)?;
            let w = &v * inner.eigenvectors();
            // descending sin θ inside the cluster
            for j in (0..m).rev() {
                basis.push(w.column(j));
            }
        }
        end = start;
    }

    let mut blocks = Vec::with_capacity(n);
    let mut phases = Vec::with_capacity(n);
    for x in &basis {
        let z = u_star.sesquilinear(x, x);
        phases.push(if z.norm() > 0.0 { z / z.norm() } else { Complex64::new(1.0, 0.0) });
        blocks.push(ComplexMatrix::outer(x, x));
    }
    Ok((IsometryTuple::new(blocks)?, phases))
}

/// Adds a Gaussian perturbation of Frobenius norm `step` to the stacked
/// isometry and re-orthonormalizes its columns.
pub fn perturb(t: &IsometryTuple, step: f64, seed: u64) -> Result<IsometryTuple> {
    if !(step >= 0.0 && step.is_finite()) {
        return Err(Error::BadParameter(format!("perturbation step {step}")));
    }
    let stacked = t.stacked();
    let moved = if step == 0.0 {
        stacked
    } else {
        let mut r = rng::seeded(seed);
        let d = rng::gaussian_matrix(&mut r, stacked.rows(), stacked.cols());
        let d = d.scale_real(step / d.frobenius_norm());
        &stacked + &d
    };
    IsometryTuple::from_stacked(t.n, &orthonormalize_columns(&moved)?)
}
