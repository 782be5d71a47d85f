use super::NormSpec;
use crate::error::Result;
use crate::matcore::ComplexMatrix;
use crate::rng;

/// `χ = ‖E‖` for the rank-one projection `E = E_11` in `M_n`.
pub fn chi(norm: &NormSpec, n: usize) -> Result<f64> {
    norm.evaluate(&ComplexMatrix::unit(n.max(1), 0, 0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvarianceReport {
    pub invariant: bool,
    /// Largest `|‖U*AU‖ − ‖A‖| / max(1, ‖A‖)` over the samples.
    pub max_deviation: f64,
}

/// Samples `(A, U)` with Gaussian `A` and Haar `U` and compares `‖U*AU‖` with `‖A‖`.
pub fn check_weak_unitary_invariance(
    norm: &NormSpec,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<InvarianceReport> {
    let mut r = rng::seeded(seed);
    let mut max_deviation: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let a = rng::gaussian_matrix(&mut r, n, n);
        let u = rng::unitary_matrix(&mut r, n);
        let before = norm.evaluate(&a)?;
        let after = norm.evaluate(&a.congruence(&u))?;
        max_deviation = max_deviation.max((after - before).abs() / before.max(1.0));
    }
    Ok(InvarianceReport {
        invariant: max_deviation <= 1e-8,
        max_deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_examples() {
        assert_eq!(chi(&NormSpec::op(), 4).unwrap(), 1.0);
        assert_eq!(chi(&NormSpec::trace(), 4).unwrap(), 1.0);
        assert!((chi(&NormSpec::DimScaledNumericalRadius, 3).unwrap() - 3.0).abs() < 1e-12);
    }

    #[test]
    fn chi_does_not_depend_on_the_projection() {
        let mut r = rng::seeded(7);
        for name in ["schatten:3", "omega", "kyfan:2"] {
            let norm: NormSpec = name.parse().unwrap();
            let x = rng::unit_vector(&mut r, 4);
            let e = ComplexMatrix::outer(&x, &x);
            assert!((norm.evaluate(&e).unwrap() - chi(&norm, 4).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn invariance_examples() {
        for name in ["schatten:1", "schatten:2", "schatten:5", "op", "omega"] {
            let norm: NormSpec = name.parse().unwrap();
            let rep = check_weak_unitary_invariance(&norm, 3, 10, 1).unwrap();
            assert!(rep.invariant, "{name}: {}", rep.max_deviation);
        }
        let rep = check_weak_unitary_invariance(&NormSpec::MaxEntry, 3, 10, 1).unwrap();
        assert!(!rep.invariant && rep.max_deviation > 1e-3);
    }
}
