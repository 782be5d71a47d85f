//! Refutation search for the M-norm and L-norm inequalities, plus the
//! structural consequences every M- or L-norm must satisfy.
//!
//! A positive [`m_defect`] or [`l_defect`] at some tuple is a proof that the
//! norm is not of that type; a search that finds nothing is only evidence.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::ComplexMatrix;
use crate::norms::{
    check_weak_unitary_invariance, chi, numerical_radius, omega_star, op_norm, trace_norm, DualConfig,
    NormClass, NormKind, NormSpec,
};
use crate::rng::{self, SeededRng};
use crate::tuples::{perturb, random_tuple, IsometryTuple};

/// Defects above this are reported as violations.
pub const DEFECT_TOL: f64 = 1e-7;
/// Defect evaluations per search restart.
pub const RESTART_LENGTH: usize = 100;
const STEP_MAX: f64 = 1e-1;
const STEP_MIN: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Property {
    /// `‖Σ C_i* X_i C_i‖ ≤ max_i ‖X_i‖`
    M,
    /// `Σ ‖C_i X C_i*‖ ≤ ‖X‖`
    L,
}

impl Property {
    pub fn swapped(self) -> Self {
        match self {
            Property::M => Property::L,
            Property::L => Property::M,
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Property::M => "M",
            Property::L => "L",
        })
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "M" | "m" => Ok(Property::M),
            "L" | "l" => Ok(Property::L),
            other => Err(Error::Parse(format!("property must be M or L, got `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Violation,
    NoViolationFound,
}

impl Verdict {
    pub fn from_defect(defect: f64) -> Self {
        if defect > DEFECT_TOL {
            Verdict::Violation
        } else {
            Verdict::NoViolationFound
        }
    }
}

/// `‖Σ C_i* X_i C_i‖ − max_i ‖X_i‖`.
pub fn m_defect(norm: &NormSpec, t: &IsometryTuple, xs: &[ComplexMatrix]) -> Result<f64> {
    let combined = t.combine(xs)?;
    let mut max = 0.0f64;
    for x in xs {
        max = max.max(norm.evaluate(x)?);
    }
    Ok(norm.evaluate(&combined)? - max)
}

/// `Σ ‖C_i X C_i*‖ − ‖X‖`.
pub fn l_defect(norm: &NormSpec, t: &IsometryTuple, x: &ComplexMatrix) -> Result<f64> {
    let mut sum = 0.0;
    for c in t.compressions(x)? {
        sum += norm.evaluate(&c)?;
    }
    Ok(sum - norm.evaluate(x)?)
}

/// Defect of `property`; `matrices` holds `k` test matrices for M and one for L.
pub fn defect(norm: &NormSpec, property: Property, t: &IsometryTuple, matrices: &[ComplexMatrix]) -> Result<f64> {
    match property {
        Property::M => m_defect(norm, t, matrices),
        Property::L => match matrices {
            [x] => l_defect(norm, t, x),
            _ => Err(Error::DimensionMismatch {
                expected: (1, 1),
                got: (matrices.len(), 1),
            }),
        },
    }
}

/// Reproducible witness produced by [`search_violation`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub property: Property,
    pub norm: String,
    pub seed: u64,
    pub defect: f64,
    pub verdict: Verdict,
    pub tuple: IsometryTuple,
    pub matrices: Vec<ComplexMatrix>,
    pub budget_used: usize,
}

impl Certificate {
    /// Re-evaluates the defect from the stored tuple and matrices.
    pub fn replay(&self) -> Result<f64> {
        let norm: NormSpec = self.norm.parse()?;
        defect(&norm, self.property, &self.tuple, &self.matrices)
    }
}

struct Candidate {
    tuple: IsometryTuple,
    matrices: Vec<ComplexMatrix>,
    defect: f64,
}

/// Rescales the test matrices jointly so the largest has unit operator norm.
fn normalize_matrices(ms: &mut [ComplexMatrix]) -> Result<()> {
    let mut max = 0.0f64;
    for m in ms.iter() {
        max = max.max(op_norm(m)?);
    }
    if max > 0.0 {
        for m in ms.iter_mut() {
            *m = m.scale_real(1.0 / max);
        }
    }
    Ok(())
}

fn random_phase(r: &mut SeededRng) -> Complex64 {
    Complex64::from_polar(1.0, r.random_range(0.0..std::f64::consts::TAU))
}

/// Pinching in a random orthonormal basis with unimodular test matrices.
///
/// With `k ≥ n` the tuple is the `n` rank-one projections padded with zero
/// blocks; otherwise basis vectors are grouped by index modulo `k`.
fn structured_start(property: Property, n: usize, k: usize, r: &mut SeededRng) -> Result<(IsometryTuple, Vec<ComplexMatrix>)> {
    let q = rng::unitary_matrix(r, n);
    let mut blocks = vec![ComplexMatrix::zeros(n, n); k];
    for j in 0..n {
        let x = q.column(j);
        let b = &mut blocks[j % k];
        *b = &*b + &ComplexMatrix::outer(&x, &x);
    }
    let tuple = IsometryTuple::new(blocks)?;
    let matrices = match property {
        Property::M => {
            let used = k.min(n);
            let mut xs: Vec<ComplexMatrix> = tuple.blocks()[..used]
                .iter()
                .map(|p| p.scale(random_phase(r)))
                .collect();
            for i in used..k {
                xs.push(xs[i % used].clone());
            }
            xs
        }
        Property::L => {
            let mut x = ComplexMatrix::zeros(n, n);
            for j in 0..n {
                let v = q.column(j);
                x = &x + &ComplexMatrix::outer(&v, &v).scale(random_phase(r));
            }
            vec![x]
        }
    };
    Ok((tuple, matrices))
}

fn random_start(property: Property, n: usize, k: usize, r: &mut SeededRng) -> Result<(IsometryTuple, Vec<ComplexMatrix>)> {
    let tuple = random_tuple(n, k, r.random())?;
    let count = if property == Property::M { k } else { 1 };
    let mut matrices: Vec<ComplexMatrix> = (0..count).map(|_| rng::gaussian_matrix(r, n, n)).collect();
    normalize_matrices(&mut matrices)?;
    Ok((tuple, matrices))
}

/// Step of the geometric schedule `STEP_MAX → STEP_MIN` across a restart.
fn scheduled_step(j: usize) -> f64 {
    let frac = j as f64 / (RESTART_LENGTH - 1) as f64;
    STEP_MAX * (STEP_MIN / STEP_MAX).powf(frac)
}

/// Hill climbing for a positive defect.
///
/// Restart 0 starts from a pinching in a random basis with unimodular test
/// matrices; later restarts from a random tuple and Gaussian test matrices.
/// Every restart runs [`RESTART_LENGTH`] defect evaluations alternating tuple
/// perturbations with rank-one updates of one test matrix, keeping strict
/// improvements. `budget` counts evaluations and truncates this fixed
/// sequence, so the best defect is nondecreasing in `budget`. Ties between
/// restarts go to the lower restart index.
pub fn search_violation(
    norm: &NormSpec,
    property: Property,
    n: usize,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<Certificate> {
    search(norm, property, n, k, budget, seed, None)
}

/// One defect evaluation of the search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluation: usize,
    pub restart: u64,
    pub defect: f64,
    /// Best defect over all evaluations so far.
    pub best: f64,
}

/// [`search_violation`] that also records every evaluation.
pub fn search_violation_traced(
    norm: &NormSpec,
    property: Property,
    n: usize,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<(Certificate, Vec<TracePoint>)> {
    let mut trace = Vec::with_capacity(budget);
    let cert = search(norm, property, n, k, budget, seed, Some(&mut trace))?;
    Ok((cert, trace))
}

fn search(
    norm: &NormSpec,
    property: Property,
    n: usize,
    k: usize,
    budget: usize,
    seed: u64,
    mut trace: Option<&mut Vec<TracePoint>>,
) -> Result<Certificate> {
    let mut record = |evaluation: usize, restart: u64, defect: f64, best: f64| {
        if let Some(t) = trace.as_deref_mut() {
            t.push(TracePoint { evaluation, restart, defect, best });
        }
    };
    if budget == 0 {
        return Err(Error::BadParameter("search budget must be at least 1".into()));
    }
    let mut best: Option<Candidate> = None;
    let mut used = 0;
    let mut restart = 0u64;
    while used < budget {
        let mut r = rng::seeded(rng::substream(seed, restart));
        let (tuple, matrices) = if restart == 0 {
            structured_start(property, n, k, &mut r)?
        } else {
            random_start(property, n, k, &mut r)?
        };
        let mut current = Candidate {
            defect: defect(norm, property, &tuple, &matrices)?,
            tuple,
            matrices,
        };
        let mut best_so_far = best.as_ref().map_or(current.defect, |b| b.defect.max(current.defect));
        record(used, restart, current.defect, best_so_far);
        used += 1;
        let mut j = 1;
        while j < RESTART_LENGTH && used < budget {
            let step = scheduled_step(j);
            let (tuple, matrices) = if j % 2 == 1 {
                (perturb(&current.tuple, step, r.random())?, current.matrices.clone())
            } else {
                let mut ms = current.matrices.clone();
                let i = r.random_range(0..ms.len());
                let u = rng::unit_vector(&mut r, n);
                let v = rng::unit_vector(&mut r, n);
                let update = ComplexMatrix::outer(&u, &v).scale_real(step);
                ms[i] = &ms[i] + &update;
                normalize_matrices(&mut ms)?;
                (current.tuple.clone(), ms)
            };
            let d = defect(norm, property, &tuple, &matrices)?;
            best_so_far = best_so_far.max(d);
            record(used, restart, d, best_so_far);
            if d > current.defect {
                current = Candidate { tuple, matrices, defect: d };
            }
            used += 1;
            j += 1;
        }
        if best.as_ref().map_or(true, |b| current.defect > b.defect) {
            best = Some(current);
        }
        restart += 1;
    }
    let best = best.expect("budget >= 1 evaluates one candidate");
    Ok(Certificate {
        property,
        norm: norm.name(),
        seed,
        defect: best.defect,
        verdict: Verdict::from_defect(best.defect),
        tuple: best.tuple,
        matrices: best.matrices,
        budget_used: used,
    })
}

/// `‖EAE‖ − ‖A‖` for an orthoprojection `E`.
pub fn projection_compression_defect(norm: &NormSpec, e: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    let compressed = &(e * a) * e;
    Ok(norm.evaluate(&compressed)? - norm.evaluate(a)?)
}

/// Largest `‖EAE‖ − ‖A‖` over random orthoprojections `E` and Gaussian `A`.
pub fn check_projection_compression(norm: &NormSpec, n: usize, trials: usize, seed: u64) -> Result<f64> {
    let mut r = rng::seeded(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials.max(1) {
        let e = rng::orthoprojection(&mut r, n)?;
        let a = rng::gaussian_matrix(&mut r, n, n);
        worst = worst.max(projection_compression_defect(norm, &e, &a)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RigidityReport {
    pub is_rigid: bool,
    /// `χ`, the constant in `‖A‖ = χ·‖A‖_∞` (or `χ·‖A‖_1`) on normal `A`.
    pub alpha: f64,
    pub max_residual: f64,
}

/// On normal matrices an M-norm is `χ·‖·‖_∞` and an L-norm is `χ·‖·‖_1`.
///
/// `class` selects which claim to test. The first sample is `A = I`; the rest
/// are unitary conjugates of random complex diagonals (real diagonals when
/// `hermitian` is set).
pub fn certify_normal_rigidity(
    norm: &NormSpec,
    class: Property,
    n: usize,
    trials: usize,
    seed: u64,
    hermitian: bool,
) -> Result<RigidityReport> {
    let inv = check_weak_unitary_invariance(norm, n, 10, rng::stream_seed(seed, "invariance"))?;
    if !inv.invariant {
        return Err(Error::NotWeaklyInvariant {
            norm: norm.name(),
            deviation: inv.max_deviation,
        });
    }
    let alpha = chi(norm, n)?;
    let mut r = rng::seeded(seed);
    let mut max_residual = 0.0f64;
    let mut is_rigid = true;
    for i in 0..trials.max(1) {
        let a = if i == 0 {
            ComplexMatrix::identity(n)
        } else {
            rng::normal_matrix(&mut r, n, hermitian)
        };
        let reference = match class {
            Property::M => op_norm(&a)?,
            Property::L => trace_norm(&a)?,
        };
        let value = norm.evaluate(&a)?;
        let residual = (value - alpha * reference).abs();
        max_residual = max_residual.max(residual);
        if residual > 1e-7 * value.max(1.0) {
            is_rigid = false;
        }
    }
    Ok(RigidityReport {
        is_rigid,
        alpha,
        max_residual,
    })
}

/// Largest violations of `lower ≤ ‖·‖/χ ≤ upper` over the samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub lower_violation: f64,
    pub upper_violation: f64,
}

/// For `‖·‖/χ` with claimed class M checks `ω ≤ ‖·‖/χ ≤ ‖·‖_∞`; for class L
/// checks `‖·‖_1 ≤ ‖·‖/χ ≤ ω_*`, with `ω_*` replaced by a lower bound.
pub fn check_sandwich(norm: &NormSpec, n: usize, trials: usize, seed: u64) -> Result<SandwichReport> {
    let class = norm.claimed_class();
    if !matches!(class, NormClass::M | NormClass::L) {
        return Err(Error::UnclaimedNorm(norm.name()));
    }
    let scale = chi(norm, n)?;
    let cfg = DualConfig::default();
    let mut r = rng::seeded(seed);
    let mut lower_violation = f64::NEG_INFINITY;
    let mut upper_violation = f64::NEG_INFINITY;
    for _ in 0..trials.max(1) {
        let a = rng::gaussian_matrix(&mut r, n, n);
        let value = norm.evaluate(&a)? / scale;
        let (lo, hi) = match class {
            NormClass::M => (numerical_radius(&a)?, op_norm(&a)?),
            _ => (trace_norm(&a)?, omega_star(&a, cfg.budget, cfg.seed)?),
        };
        lower_violation = lower_violation.max(lo - value);
        upper_violation = upper_violation.max(value - hi);
    }
    Ok(SandwichReport {
        lower_violation,
        upper_violation,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub norm: String,
    pub dual: String,
    pub property: Property,
    pub primal_verdict: Verdict,
    pub primal_defect: f64,
    pub dual_verdict: Verdict,
    pub dual_defect: f64,
    /// Both the norm and its dual are evaluated exactly.
    pub exact_dual: bool,
    pub consistent: bool,
    pub warning: Option<String>,
}

/// A norm is M exactly when its dual is L. Searches the norm for `property`
/// and its dual for the swapped property; disagreement is an inconsistency
/// for exact pairs and only a warning when a dual is optimizer-evaluated.
pub fn duality_crosscheck(
    norm: &NormSpec,
    property: Property,
    n: usize,
    k: usize,
    budget: usize,
    seed: u64,
) -> Result<DualityReport> {
    let dual = norm.dual();
    let primal = search_violation(norm, property, n, k, budget, rng::stream_seed(seed, "primal"))?;
    let other = search_violation(&dual, property.swapped(), n, k, budget, rng::stream_seed(seed, "dual"))?;
    let exact_dual = norm.kind() == NormKind::Exact && dual.kind() == NormKind::Exact;
    let agree = primal.verdict == other.verdict;
    let warning = if !agree && !exact_dual {
        Some("verdicts differ; optimized dual values are lower bounds and may mask violations".into())
    } else {
        None
    };
    Ok(DualityReport {
        norm: norm.name(),
        dual: dual.name(),
        property,
        primal_verdict: primal.verdict,
        primal_defect: primal.defect,
        dual_verdict: other.verdict,
        dual_defect: other.defect,
        exact_dual,
        consistent: agree || !exact_dual,
        warning,
    })
}
