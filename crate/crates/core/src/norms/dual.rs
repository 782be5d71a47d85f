use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{trace_norm, NormSpec};
use crate::error::{Error, Result};
use crate::matcore::{polar, ComplexMatrix};
use crate::rng::{self, SeededRng};

/// Starts of the multi-start dual ascent.
const STARTS: usize = 8;
const MIN_STEP: f64 = 1e-12;

/// Search parameters for norms evaluated as a supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualConfig {
    /// Ascent moves shared by all starts.
    pub budget: usize,
    pub seed: u64,
}

impl Default for DualConfig {
    fn default() -> Self {
        Self { budget: 64, seed: 0 }
    }
}

/// Certified lower bound of `‖Y‖_* = sup{|⟨Y|X⟩| : ‖X‖ ≤ 1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualEvalResult {
    pub lower_bound: f64,
    /// Point of the primal unit ball attaining `lower_bound`.
    pub witness: ComplexMatrix,
    pub iterations: usize,
    /// The move budget ran out before every start had stalled; the result is
    /// still the best value found.
    pub budget_exhausted: bool,
}

/// Trace duality `⟨Y|X⟩ = Tr(Y*X)`.
pub fn pairing(y: &ComplexMatrix, x: &ComplexMatrix) -> Result<Complex64> {
    if y.shape() != x.shape() {
        return Err(Error::DimensionMismatch {
            expected: y.shape(),
            got: x.shape(),
        });
    }
    Ok(y.data().iter().zip(x.data()).map(|(a, b)| a.conj() * b).sum())
}

struct Start {
    x: ComplexMatrix,
    value: f64,
    step: f64,
    moves: usize,
    rng: SeededRng,
}

impl Start {
    fn stalled(&self) -> bool {
        self.step < MIN_STEP
    }
}

/// Rescales `x` onto the unit sphere of `base`; `None` for a null vector.
fn normalize(base: &NormSpec, x: &ComplexMatrix) -> Result<Option<ComplexMatrix>> {
    let v = base.evaluate(x)?;
    if !(v.is_finite() && v > 0.0) {
        return Ok(None);
    }
    Ok(Some(x.scale_real(1.0 / v)))
}

/// Dual norm by multi-start ascent over the unit ball of `base`.
///
/// Starts are the unitary polar factor of `Y`, `Y` itself and six Gaussian
/// matrices, each rescaled onto the unit sphere of `base`. Moves alternate
/// between a phase-aligned step along `Y` (the gradient of `|⟨Y|X⟩|`) and a
/// random direction; every candidate is pulled back onto the sphere by
/// rescaling and kept only if it improves. Starts advance round-robin, so the
/// result for a given seed is nondecreasing in `budget`.
pub fn dual_norm_eval(
    base: &NormSpec,
    y: &ComplexMatrix,
    budget: usize,
    seed: u64,
) -> Result<DualEvalResult> {
    let n = y.dim()?;
    if y.is_zero() {
        return Ok(DualEvalResult {
            lower_bound: 0.0,
            witness: ComplexMatrix::zeros(n, n),
            iterations: 0,
            budget_exhausted: false,
        });
    }
    let y_norm = y.frobenius_norm();

    let mut starts = Vec::with_capacity(STARTS);
    for index in 0..STARTS {
        let mut rng = rng::seeded(rng::substream(seed, index as u64));
        let candidate = match index {
            0 => polar(y)?.unitary_factor,
            1 => y.clone(),
            _ => rng::gaussian_matrix(&mut rng, n, n),
        };
        let x = match normalize(base, &candidate)? {
            Some(x) => x,
            None => loop {
                if let Some(x) = normalize(base, &rng::gaussian_matrix(&mut rng, n, n))? {
                    break x;
                }
            },
        };
        let value = pairing(y, &x)?.norm();
        starts.push(Start {
            x,
            value,
            step: 0.25,
            moves: 0,
            rng,
        });
    }

    let mut iterations = 0;
    while iterations < budget && !starts.iter().all(Start::stalled) {
        for s in starts.iter_mut() {
            if iterations == budget {
                break;
            }
            if s.stalled() {
                continue;
            }
            iterations += 1;
            let direction = if s.moves % 2 == 0 {
                let phase = pairing(y, &s.x)?;
                let unit = if phase.norm() > 0.0 { phase / phase.norm() } else { Complex64::new(1.0, 0.0) };
                y.scale(unit / y_norm)
            } else {
                let g = rng::gaussian_matrix(&mut s.rng, n, n);
                let g_norm = g.frobenius_norm();
                g.scale_real(1.0 / g_norm)
            };
            s.moves += 1;
            let trial = &s.x + &direction.scale_real(s.step * s.x.frobenius_norm());
            match normalize(base, &trial)? {
                Some(x) => {
                    let value = pairing(y, &x)?.norm();
                    if value > s.value {
                        s.x = x;
                        s.value = value;
                        s.step = (s.step * 1.5).min(1.0);
                    } else {
                        s.step *= 0.5;
                    }
                }
                None => s.step *= 0.5,
            }
        }
    }

    // deterministic reduction: best value, ties to the lowest start index
    let mut best = 0;
    for (i, s) in starts.iter().enumerate() {
        if s.value > starts[best].value {
            best = i;
        }
    }
    let witness = starts.swap_remove(best).x;
    let lower_bound = pairing(y, &witness)?.norm();
    Ok(DualEvalResult {
        lower_bound,
        witness,
        iterations,
        budget_exhausted: !starts.iter().all(Start::stalled) && iterations == budget,
    })
}

/// `ω_*(Y)`, the dual of the numerical radius, as a certified lower bound.
///
/// Fails with [`Error::Inconsistent`] if the bound drops below `‖Y‖_1 − 1e−6`,
/// which the polar start alone rules out.
pub fn omega_star(y: &ComplexMatrix, budget: usize, seed: u64) -> Result<f64> {
    let r = dual_norm_eval(&NormSpec::NumericalRadius, y, budget, seed)?;
    let trace = trace_norm(y)?;
    if r.lower_bound < trace - 1e-6 {
        return Err(Error::Inconsistent(format!(
            "omega_* lower bound {} below trace norm {}",
            r.lower_bound, trace
        )));
    }
    Ok(r.lower_bound)
}
