use num_complex::Complex64;

use crate::error::Result;
use crate::matcore::{eigh, ComplexMatrix};

/// Grid size for the angular search.
pub const NR_GRID: usize = 256;
/// Width at which golden-section refinement stops.
const THETA_TOL: f64 = 1e-10;

struct AngularProfile {
    real_part: ComplexMatrix,
    imag_part: ComplexMatrix,
}

impl AngularProfile {
    fn new(a: &ComplexMatrix) -> Self {
        let adj = a.adjoint();
        let real_part = (a + &adj).scale_real(0.5);
        let imag_part = (a - &adj).scale(Complex64::new(0.0, -0.5));
        Self {
            real_part: real_part.hermitian_part(),
            imag_part: imag_part.hermitian_part(),
        }
    }

    /// `λ_max(Re(e^{iθ} A)) = λ_max(cos θ·Re A − sin θ·Im A)`.
    fn eval(&self, theta: f64) -> Result<f64> {
        let (s, c) = theta.sin_cos();
        let m = &self.real_part.scale_real(c) - &self.imag_part.scale_real(s);
        Ok(eigh(&m)?.max())
    }
}

/// Numerical radius `ω(A) = max_θ λ_max(Re(e^{iθ}A))`.
///
/// The maximum is located on a uniform grid of [`NR_GRID`] angles and every grid
/// peak that could still hold the global maximum (by the Lipschitz bound
/// `‖A‖_F` in θ) is refined by golden-section search. The returned value is
/// attained at some angle, so it never exceeds the true radius.
pub fn numerical_radius(a: &ComplexMatrix) -> Result<f64> {
    a.dim()?;
    if a.is_zero() {
        return Ok(0.0);
    }
    let profile = AngularProfile::new(a);
    let step = std::f64::consts::TAU / NR_GRID as f64;
    let values: Vec<f64> = (0..NR_GRID)
        .map(|k| profile.eval(k as f64 * step))
        .collect::<Result<_>>()?;
    let mut best = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let slack = a.frobenius_norm() * step;

    let peaks: Vec<usize> = (0..NR_GRID)
        .filter(|&k| {
            let prev = values[(k + NR_GRID - 1) % NR_GRID];
            let next = values[(k + 1) % NR_GRID];
            values[k] >= prev && values[k] >= next && values[k] >= best - slack
        })
        .collect();
    for k in peaks {
        let centre = k as f64 * step;
        best = best.max(golden_max(&profile, centre - step, centre + step)?);
    }
    Ok(best.max(0.0))
}

fn golden_max(profile: &AngularProfile, mut lo: f64, mut hi: f64) -> Result<f64> {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let mut f1 = profile.eval(x1)?;
    let mut f2 = profile.eval(x2)?;
    let mut best = f1.max(f2);
    while hi - lo > THETA_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = profile.eval(x2)?;
            best = best.max(f2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = profile.eval(x1)?;
            best = best.max(f1);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::svd;
    use crate::rng;

    /// Brute force over unit vectors `x = (cos a, e^{ib} sin a)` of `|⟨x, Ax⟩|`.
    fn grid_oracle_2x2(a: &ComplexMatrix) -> f64 {
        let m = 600;
        let mut best: f64 = 0.0;
        for i in 0..=m {
            let t = std::f64::consts::FRAC_PI_2 * i as f64 / m as f64;
            for j in 0..m {
                let b = std::f64::consts::TAU * j as f64 / m as f64;
                let x = [
                    Complex64::new(t.cos(), 0.0),
                    Complex64::from_polar(t.sin(), b),
                ];
                best = best.max(a.sesquilinear(&x, &x).norm());
            }
        }
        best
    }

    #[test]
    fn shift_matrix() {
        let j2 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]);
        let oracle = grid_oracle_2x2(&j2);
        assert!((oracle - 0.5).abs() < 1e-5);
        assert!((numerical_radius(&j2).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hermitian_and_identity() {
        assert!((numerical_radius(&ComplexMatrix::identity(3)).unwrap() - 1.0).abs() < 1e-14);
        let h = ComplexMatrix::from_real_diag(&[0.5, -2.0, 1.0]);
        assert!((numerical_radius(&h).unwrap() - 2.0).abs() < 1e-14);
        let mut r = rng::seeded(4);
        let h = rng::hermitian_matrix(&mut r, 4);
        let e = eigh(&h).unwrap();
        assert!((numerical_radius(&h).unwrap() - e.spectral_radius()).abs() < 1e-12);
    }

    #[test]
    fn random_two_by_two_against_brute_force() {
        let mut r = rng::seeded(5);
        for _ in 0..5 {
            let a = rng::gaussian_matrix(&mut r, 2, 2);
            let w = numerical_radius(&a).unwrap();
            let oracle = grid_oracle_2x2(&a);
            // the oracle is a lower bound with resolution ~1e-4
            assert!(w >= oracle - 1e-12);
            assert!(w - oracle < 1e-3 * a.frobenius_norm());
        }
    }

    #[test]
    fn classical_bounds() {
        let mut r = rng::seeded(6);
        for trial in 0..100 {
            let n = 1 + trial % 5;
            let a = rng::gaussian_matrix(&mut r, n, n);
            let op = svd(&a).unwrap().singular_values[0];
            let w = numerical_radius(&a).unwrap();
            assert!(w <= op + 1e-9);
            assert!(w >= op / 2.0 - 1e-8);
        }
    }
}
