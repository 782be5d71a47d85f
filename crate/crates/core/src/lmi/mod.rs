//! Membership in the sets `U_{φ,ψ} = {X : [[φ(A), X], [X*, ψ(A)]] ⪰ 0 for some 0 ⪯ A ⪯ I}`
//! for matrix concave `φ, ψ` on `(0, 1)`, and the operator inequalities
//! behind their C*-convexity.
//!
//! Membership is decided by maximizing the smallest eigenvalue of the block
//! matrix over `A`. A positive answer comes with a witness `A`; a negative
//! answer only means none was found within the budget.

mod nelder_mead;

use std::fmt;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matcore::{apply_fn_on, eigh, min_eigenvalue, ComplexMatrix, Domain, HermitianEig, CLAMP_EPS};
use crate::norms::numerical_radius;
use crate::rng;
use crate::tuples::IsometryTuple;

/// Smallest eigenvalue accepted as positive semidefinite.
pub const FEAS_TOL: f64 = 1e-7;
pub const RESTARTS: usize = 8;
/// Width of the band around `ω = 1` left out of cross-check scoring.
pub const NR_MARGIN: f64 = 1e-4;
const SINGULAR_PSI: f64 = 1e-12;

/// A positive matrix concave function on `(0, 1)`.
#[derive(Clone, Copy)]
pub struct ConcaveFn {
    name: &'static str,
    rule: fn(f64) -> f64,
}

impl ConcaveFn {
    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.rule)(t)
    }

    /// `f(H)` with the spectrum clamped into `[ε, 1 − ε]`.
    pub fn apply(&self, h: &ComplexMatrix) -> Result<ComplexMatrix> {
        apply_fn_on(h, self.rule, Domain::UNIT_OPEN).map_err(|e| match e {
            Error::DomainViolation { value, lo, hi, .. } => Error::DomainViolation {
                name: self.name.into(),
                value,
                lo,
                hi,
            },
            other => other,
        })
    }

    pub fn lookup(name: &str) -> Result<Self> {
        let canonical = match name.trim() {
            "1" => "const1",
            "1-t" | "2-2t" => "2(1-t)",
            "t^1/2" => "sqrt",
            other => other,
        };
        registry()
            .iter()
            .find(|f| f.name == canonical)
            .copied()
            .ok_or_else(|| Error::UnknownFunction(name.to_string()))
    }
}

impl fmt::Debug for ConcaveFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConcaveFn({})", self.name)
    }
}

impl PartialEq for ConcaveFn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Serialize for ConcaveFn {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name)
    }
}

static REGISTRY: [ConcaveFn; 8] = [
    ConcaveFn { name: "const1", rule: |_| 1.0 },
    ConcaveFn { name: "2t", rule: |t| 2.0 * t },
    ConcaveFn { name: "2(1-t)", rule: |t| 2.0 * (1.0 - t) },
    ConcaveFn { name: "sqrt", rule: f64::sqrt },
    ConcaveFn { name: "t^0.25", rule: |t| t.powf(0.25) },
    ConcaveFn { name: "t^0.5", rule: |t| t.powf(0.5) },
    ConcaveFn { name: "t^0.75", rule: |t| t.powf(0.75) },
    ConcaveFn { name: "log(1+t)", rule: f64::ln_1p },
];

pub fn registry() -> &'static [ConcaveFn] {
    &REGISTRY
}

/// `[[P11, X], [X*, P22]]`.
pub fn block2(p11: &ComplexMatrix, x: &ComplexMatrix, p22: &ComplexMatrix) -> Result<ComplexMatrix> {
    ComplexMatrix::block2x2(p11, x, &x.adjoint(), p22)
}

/// `λ_min([[φ(A), X], [X*, ψ(A)]])`.
pub fn block_min_eig(phi: ConcaveFn, psi: ConcaveFn, x: &ComplexMatrix, a: &ComplexMatrix) -> Result<f64> {
    min_eigenvalue(&block2(&phi.apply(a)?, x, &psi.apply(a)?)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityResult {
    pub phi: ConcaveFn,
    pub psi: ConcaveFn,
    pub feasible: bool,
    /// Best `A` found; present only when feasible.
    pub witness_a: Option<ComplexMatrix>,
    pub achieved_min_eig: f64,
    pub iterations: usize,
    /// Best smallest eigenvalue after each restart.
    pub trace: Vec<f64>,
}

fn logistic(t: f64) -> f64 {
    0.5 * (1.0 + t.tanh())
}

/// Hermitian `B` from `n²` reals: the diagonal, then real and imaginary parts
/// of the strict upper triangle.
fn hermitian_from_params(n: usize, p: &[f64]) -> ComplexMatrix {
    let mut b = ComplexMatrix::zeros(n, n);
    let mut idx = n;
    for i in 0..n {
        b[(i, i)] = Complex64::new(p[i], 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(p[idx], p[idx + 1]);
            idx += 2;
            b[(i, j)] = z;
            b[(j, i)] = z.conj();
        }
    }
    b
}

fn params_from_hermitian(b: &ComplexMatrix) -> Vec<f64> {
    let n = b.rows();
    let mut p: Vec<f64> = (0..n).map(|i| b[(i, i)].re).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            p.push(b[(i, j)].re);
            p.push(b[(i, j)].im);
        }
    }
    p
}

/// `φ(h(B))`, `ψ(h(B))` and `h(B)` from one eigendecomposition of `B`.
fn blocks_at(phi: ConcaveFn, psi: ConcaveFn, eig: &HermitianEig) -> [ComplexMatrix; 3] {
    let clamp = |t: f64| t.clamp(CLAMP_EPS, 1.0 - CLAMP_EPS);
    [
        eig.map_spectrum(|l| phi.eval(clamp(logistic(l)))),
        eig.map_spectrum(|l| psi.eval(clamp(logistic(l)))),
        eig.map_spectrum(logistic),
    ]
}

/// Searches `A = h(B)`, `h(t) = (1 + tanh t)/2`, over Hermitian `B` for a
/// positive semidefinite block `[[φ(A), X], [X*, ψ(A)]]`.
///
/// Nelder–Mead on the `n²` real coordinates of `B` with [`RESTARTS`] restarts
/// sharing `budget` evaluations: the first from `B = 0` (`A = I/2`), then
/// alternately a contracted simplex around the incumbent and a random
/// Hermitian start. Search stops once the smallest eigenvalue is
/// nonnegative; the verdict is feasible iff it reaches `−FEAS_TOL`.
pub fn membership_feasibility(
    phi: ConcaveFn,
    psi: ConcaveFn,
    x: &ComplexMatrix,
    budget: usize,
    seed: u64,
) -> Result<FeasibilityResult> {
    let n = x.dim()?;
    let objective = |p: &[f64]| -> f64 {
        let b = hermitian_from_params(n, p);
        match eigh(&b) {
            Ok(eig) => {
                let [fa, ga, _] = blocks_at(phi, psi, &eig);
                match block2(&fa, x, &ga).and_then(|m| min_eigenvalue(&m)) {
                    Ok(l) => -l,
                    Err(_) => f64::INFINITY,
                }
            }
            Err(_) => f64::INFINITY,
        }
    };

    let mut r = rng::seeded(seed);
    let mut best_x = vec![0.0; n * n];
    let mut best_value = f64::INFINITY;
    let mut used = 0;
    let mut trace = Vec::with_capacity(RESTARTS);
    for restart in 0..RESTARTS {
        let remaining = budget.saturating_sub(used);
        if remaining == 0 || best_value <= 0.0 {
            break;
        }
        let share = remaining / (RESTARTS - restart);
        let share = share.max(remaining.min(n * n + 2));
        let (start, scale) = match restart {
            0 => (vec![0.0; n * n], 1.0),
            r_ if r_ % 2 == 1 => (best_x.clone(), 0.5f64.powi(r_ as i32 / 2 + 1)),
            _ => (params_from_hermitian(&rng::hermitian_matrix(&mut r, n)), 1.0),
        };
        let out = nelder_mead::minimize(objective, &start, scale, share, 0.0);
        used += out.evaluations;
        if out.value < best_value {
            best_value = out.value;
            best_x = out.x;
        }
        trace.push(-best_value);
    }

    let achieved_min_eig = -best_value;
    let feasible = achieved_min_eig >= -FEAS_TOL;
    let witness_a = if feasible {
        let eig = eigh(&hermitian_from_params(n, &best_x))?;
        let [_, _, a] = blocks_at(phi, psi, &eig);
        Some(a)
    } else {
        None
    };
    Ok(FeasibilityResult {
        phi,
        psi,
        feasible,
        witness_a,
        achieved_min_eig,
        iterations: used,
        trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NrCrosscheck {
    pub omega: f64,
    pub member: bool,
    /// `|ω − 1| ≤ NR_MARGIN`; such cases are not scored.
    pub in_margin: bool,
    pub consistent: bool,
}

/// Compares membership in `U_{2t, 2(1−t)}` with `ω(X) ≤ 1`.
pub fn nr_crosscheck(x: &ComplexMatrix, budget: usize, seed: u64) -> Result<NrCrosscheck> {
    let omega = numerical_radius(x)?;
    let res = membership_feasibility(ConcaveFn::lookup("2t")?, ConcaveFn::lookup("2(1-t)")?, x, budget, seed)?;
    let in_margin = (omega - 1.0).abs() <= NR_MARGIN;
    Ok(NrCrosscheck {
        omega,
        member: res.feasible,
        in_margin,
        consistent: in_margin || res.feasible == (omega <= 1.0),
    })
}

/// `λ_min(f(Σ C_j* A_j C_j) − Σ C_j* f(A_j) C_j)`; nonnegative for matrix
/// concave `f`.
pub fn jensen_check(f: ConcaveFn, t: &IsometryTuple, a_list: &[ComplexMatrix]) -> Result<f64> {
    let combined = t.combine(a_list)?.hermitian_part();
    let images: Vec<ComplexMatrix> = a_list.iter().map(|a| f.apply(a)).collect::<Result<_>>()?;
    let rhs = t.combine(&images)?;
    min_eigenvalue(&(&f.apply(&combined)? - &rhs).hermitian_part())
}

/// `g(X, Y) = X ψ(Y)^{-1} X*`.
pub fn g_map(psi: ConcaveFn, x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let values = psi.apply(y)?;
    let eig = eigh(&values)?;
    if eig.min() < SINGULAR_PSI {
        return Err(Error::SingularPsi { min_eig: eig.min() });
    }
    let inverse = eig.map_spectrum(|l| 1.0 / l);
    Ok((&(x * &inverse) * &x.adjoint()).hermitian_part())
}

/// Smallest eigenvalue of `(g(X_1,Y_1) + g(X_2,Y_2))/2 − g((X_1+X_2)/2, (Y_1+Y_2)/2)`
/// over `trials` samples with Gaussian `X_i` and `Y_i` spectra in `(δ, 1 − δ)`, `δ = 0.05`.
pub fn joint_convexity_check(psi: ConcaveFn, n: usize, trials: usize, seed: u64) -> Result<f64> {
    const DELTA: f64 = 0.05;
    let mut r = rng::seeded(seed);
    let mut worst = f64::INFINITY;
    for _ in 0..trials.max(1) {
        let x1 = rng::gaussian_matrix(&mut r, n, n);
        let x2 = rng::gaussian_matrix(&mut r, n, n);
        let y1 = rng::hermitian_with_spectrum_in(&mut r, n, DELTA, 1.0 - DELTA);
        let y2 = rng::hermitian_with_spectrum_in(&mut r, n, DELTA, 1.0 - DELTA);
        worst = worst.min(joint_convexity_residual(psi, [&x1, &x2], [&y1, &y2])?);
    }
    Ok(worst)
}

/// Midpoint convexity residual of `g` for one pair of points.
pub fn joint_convexity_residual(psi: ConcaveFn, x: [&ComplexMatrix; 2], y: [&ComplexMatrix; 2]) -> Result<f64> {
    let mid_x = (x[0] + x[1]).scale_real(0.5);
    let mid_y = (y[0] + y[1]).scale_real(0.5);
    let avg = (&g_map(psi, x[0], y[0])? + &g_map(psi, x[1], y[1])?).scale_real(0.5);
    min_eigenvalue(&(&avg - &g_map(psi, &mid_x, &mid_y)?).hermitian_part())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub combination: ComplexMatrix,
    /// Smallest eigenvalue at `A = Σ C_i* A_i C_i` built from the members' witnesses.
    pub constructive_min_eig: f64,
    pub feasible: bool,
    /// The combination was not found feasible; worth investigating, not a refutation.
    pub flagged: bool,
    /// Feasibility search result when the constructive witness fell short.
    pub search: Option<FeasibilityResult>,
}

/// Checks that `Σ C_i* X_i C_i` stays in `U_{φ,ψ}` for members `X_i`.
///
/// Tries the witness `Σ C_i* A_i C_i` first and falls back to a search.
pub fn cstar_convexity_probe(
    phi: ConcaveFn,
    psi: ConcaveFn,
    members: &[ComplexMatrix],
    t: &IsometryTuple,
    budget: usize,
    seed: u64,
) -> Result<ProbeReport> {
    let mut witnesses = Vec::with_capacity(members.len());
    for (i, m) in members.iter().enumerate() {
        let res = membership_feasibility(phi, psi, m, budget, rng::substream(seed, i as u64))?;
        match res.witness_a {
            Some(a) => witnesses.push(a),
            None => {
                return Err(Error::BadParameter(format!(
                    "member {i} not found in the set (min eigenvalue {:.3e})",
                    res.achieved_min_eig
                )))
            }
        }
    }
    let combination = t.combine(members)?;
    let a = t.combine(&witnesses)?.hermitian_part();
    let constructive_min_eig = block_min_eig(phi, psi, &combination, &a)?;
    let (feasible, search) = if constructive_min_eig >= -FEAS_TOL {
        (true, None)
    } else {
        let res = membership_feasibility(phi, psi, &combination, budget, rng::stream_seed(seed, "combination"))?;
        (res.feasible, Some(res))
    };
    Ok(ProbeReport {
        combination,
        constructive_min_eig,
        feasible,
        flagged: !feasible,
        search,
    })
}

#[cfg(test)]
mod tests;
