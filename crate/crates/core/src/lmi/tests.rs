use super::*;
use crate::norms::op_norm;
use crate::tuples::random_tuple;
use proptest::prelude::*;

fn f(name: &str) -> ConcaveFn {
    ConcaveFn::lookup(name).unwrap()
}

fn j2() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]])
}

#[test]
fn registry_examples() {
    let names: Vec<_> = registry().iter().map(|f| f.name()).collect();
    for required in ["const1", "2t", "2(1-t)", "sqrt", "t^0.25", "t^0.5", "t^0.75", "log(1+t)"] {
        assert!(names.contains(&required), "{required}");
    }
    let d = f("2t").apply(&ComplexMatrix::from_real_diag(&[0.25, 0.5])).unwrap();
    assert!((&d - &ComplexMatrix::from_real_diag(&[0.5, 1.0])).max_abs() < 1e-12);
    let mut r = rng::seeded(1);
    let a = rng::hermitian_with_spectrum_in(&mut r, 3, 0.1, 0.9);
    assert!((&f("1").apply(&a).unwrap() - &ComplexMatrix::identity(3)).max_abs() < 1e-12);
    assert!(matches!(ConcaveFn::lookup("t^2"), Err(Error::UnknownFunction(_))));
    assert!(matches!(
        f("sqrt").apply(&ComplexMatrix::from_real_diag(&[0.5, 1.5])),
        Err(Error::DomainViolation { .. })
    ));
}

#[test]
fn registry_is_midpoint_concave() {
    let mut r = rng::seeded(2);
    for func in registry() {
        for _ in 0..100 {
            let h = rng::hermitian_with_spectrum_in(&mut r, 3, 0.0, 1.0);
            let k = rng::hermitian_with_spectrum_in(&mut r, 3, 0.0, 1.0);
            let mid = func.apply(&(&h + &k).scale_real(0.5)).unwrap();
            let avg = (&func.apply(&h).unwrap() + &func.apply(&k).unwrap()).scale_real(0.5);
            let residual = min_eigenvalue(&(&mid - &avg).hermitian_part()).unwrap();
            assert!(residual >= -1e-8, "{}: {residual}", func.name());
        }
    }
}

#[test]
fn block2_examples() {
    let i = ComplexMatrix::identity(2);
    let z = ComplexMatrix::zeros(2, 2);
    assert_eq!(block2(&i, &z, &i).unwrap(), ComplexMatrix::identity(4));
    let mut r = rng::seeded(3);
    for _ in 0..50 {
        let a = rng::gaussian_matrix(&mut r, 3, 3);
        let b = block2(&ComplexMatrix::identity(3), &a, &ComplexMatrix::identity(3)).unwrap();
        let psd = crate::matcore::is_psd(&b, 1e-10).unwrap();
        assert_eq!(psd, op_norm(&a).unwrap() <= 1.0);
        let a = a.scale_real(0.999 / op_norm(&a).unwrap());
        let b = block2(&ComplexMatrix::identity(3), &a, &ComplexMatrix::identity(3)).unwrap();
        assert!(crate::matcore::is_psd(&b, 1e-10).unwrap());
    }
    let d = ComplexMatrix::from_real_diag(&[0.2, 0.7]);
    let b = block2(&f("2t").apply(&d).unwrap(), &j2(), &f("2(1-t)").apply(&d).unwrap()).unwrap();
    assert_eq!(b.hermitian_asymmetry(), 0.0);
    assert!(block2(&i, &ComplexMatrix::identity(3), &i).is_err());
}

#[test]
fn parametrization_round_trip() {
    let mut r = rng::seeded(4);
    let b = rng::hermitian_matrix(&mut r, 4);
    let p = params_from_hermitian(&b);
    assert_eq!(p.len(), 16);
    assert!((&hermitian_from_params(4, &p) - &b).max_abs() < 1e-15);
}

#[test]
fn membership_examples() {
    let one = f("const1");
    let x = j2().scale_real(0.5);
    let res = membership_feasibility(one, one, &x, 200, 0).unwrap();
    assert!(res.feasible && (res.achieved_min_eig - 0.5).abs() < 1e-12);

    let (phi, psi) = (f("2t"), f("2(1-t)"));
    let res = membership_feasibility(phi, psi, &j2(), 2000, 0).unwrap();
    assert!(res.feasible, "{}", res.achieved_min_eig);
    let a = res.witness_a.as_ref().unwrap();
    assert!(block_min_eig(phi, psi, &j2(), a).unwrap() >= -FEAS_TOL);
    let e = eigh(a).unwrap();
    assert!(e.min() >= -1e-9 && e.max() <= 1.0 + 1e-9);

    let res = membership_feasibility(phi, psi, &ComplexMatrix::unit(2, 0, 0).scale_real(3.0), 2000, 0).unwrap();
    assert!(!res.feasible && res.witness_a.is_none());
    assert!(res.iterations <= 2000);
}

#[test]
fn identity_functions_reduce_to_the_operator_norm_test() {
    let one = f("const1");
    let mut r = rng::seeded(5);
    for i in 0..40 {
        let x = rng::gaussian_matrix(&mut r, 3, 3);
        let target = 0.5 + i as f64 / 40.0;
        let x = x.scale_real(target / op_norm(&x).unwrap());
        let res = membership_feasibility(one, one, &x, 100, i).unwrap();
        assert_eq!(res.feasible, op_norm(&x).unwrap() <= 1.0 + 1e-7);
    }
}

#[test]
fn crosscheck_examples() {
    let rep = nr_crosscheck(&ComplexMatrix::zeros(2, 2), 500, 0).unwrap();
    assert!(rep.omega == 0.0 && rep.member && rep.consistent);
    let rep = nr_crosscheck(&j2().scale_real(1.8), 2000, 0).unwrap();
    assert!((rep.omega - 0.9).abs() < 1e-9 && rep.member && rep.consistent);
    let rep = nr_crosscheck(&ComplexMatrix::identity(2).scale_real(2.0), 2000, 0).unwrap();
    assert!((rep.omega - 2.0).abs() < 1e-9 && !rep.member && rep.consistent);
}

#[test]
fn feasibility_is_monotone_under_shrinking() {
    let (phi, psi) = (f("2t"), f("2(1-t)"));
    let mut r = rng::seeded(6);
    for seed in 0..10 {
        let x = rng::gaussian_matrix(&mut r, 3, 3);
        let x = x.scale_real(0.8 / numerical_radius(&x).unwrap());
        let res = membership_feasibility(phi, psi, &x, 2000, seed).unwrap();
        assert!(res.feasible);
        let a = res.witness_a.unwrap();
        for s in [0.0, 0.3, 0.7, 1.0] {
            let v = block_min_eig(phi, psi, &x.scale_real(s), &a).unwrap();
            assert!(v >= res.achieved_min_eig.min(0.0) - 1e-9);
        }
    }
}

#[test]
fn jensen_examples() {
    let mut r = rng::seeded(7);
    let t = random_tuple(3, 2, 1).unwrap();
    let a_list: Vec<_> = (0..2).map(|_| rng::hermitian_with_spectrum_in(&mut r, 3, 0.0, 1.0)).collect();
    // linear functions are affine; only rounding remains
    assert!(jensen_check(f("2t"), &t, &a_list).unwrap().abs() <= 1e-9);
    assert!(jensen_check(f("sqrt"), &t, &a_list).unwrap() >= -1e-8);

    let u = rng::unitary_matrix(&mut r, 3);
    let t = IsometryTuple::new(vec![u]).unwrap();
    let a = rng::hermitian_with_spectrum_in(&mut r, 3, 0.0, 1.0);
    for func in registry() {
        assert!(jensen_check(*func, &t, std::slice::from_ref(&a)).unwrap().abs() <= 1e-9);
    }
    let bad = ComplexMatrix::from_real_diag(&[2.0, 0.5, 0.5]);
    assert!(jensen_check(f("sqrt"), &t, &[bad]).is_err());
}

#[test]
fn joint_convexity_examples() {
    let mut r = rng::seeded(8);
    let x = rng::gaussian_matrix(&mut r, 3, 3);
    let y = rng::hermitian_with_spectrum_in(&mut r, 3, 0.05, 0.95);
    let v = joint_convexity_residual(f("sqrt"), [&x, &x], [&y, &y]).unwrap();
    assert!(v.abs() < 1e-12);
    assert!(joint_convexity_check(f("const1"), 3, 100, 1).unwrap() >= -1e-10);
    assert!(joint_convexity_check(f("2(1-t)"), 3, 100, 2).unwrap() >= -1e-7);
    // spectra clamped to ε keep ψ(Y) invertible at the boundary
    let zero = ComplexMatrix::zeros(2, 2);
    assert!(g_map(f("2t"), &ComplexMatrix::identity(2), &zero).is_ok());
}

#[test]
fn probe_examples() {
    let (phi, psi) = (f("2t"), f("2(1-t)"));
    let t = random_tuple(2, 2, 3).unwrap();
    let zeros = vec![ComplexMatrix::zeros(2, 2); 2];
    let rep = cstar_convexity_probe(phi, psi, &zeros, &t, 500, 0).unwrap();
    assert!(rep.feasible && rep.combination.is_zero());

    let mut r = rng::seeded(9);
    let members: Vec<_> = (0..2)
        .map(|_| {
            let x = rng::gaussian_matrix(&mut r, 2, 2);
            x.scale_real(0.9 / numerical_radius(&x).unwrap())
        })
        .collect();
    let rep = cstar_convexity_probe(phi, psi, &members, &t, 2000, 1).unwrap();
    assert!(rep.feasible && !rep.flagged);
    assert!(rep.constructive_min_eig >= -FEAS_TOL);
    assert!(numerical_radius(&rep.combination).unwrap() <= 1.0 + 1e-9);

    let one = f("const1");
    let members: Vec<_> = (0..2)
        .map(|_| {
            let x = rng::gaussian_matrix(&mut r, 2, 2);
            x.scale_real(1.0 / op_norm(&x).unwrap())
        })
        .collect();
    let rep = cstar_convexity_probe(one, one, &members, &t, 200, 2).unwrap();
    assert!(rep.feasible);

    let outsider = vec![ComplexMatrix::identity(2).scale_real(3.0), ComplexMatrix::zeros(2, 2)];
    assert!(cstar_convexity_probe(phi, psi, &outsider, &t, 200, 3).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn jensen_holds_across_the_registry(seed in any::<u64>(), n in 1usize..4, k in 1usize..4) {
        let mut r = rng::seeded(seed);
        let t = random_tuple(n, k, seed).unwrap();
        let a_list: Vec<_> = (0..k).map(|_| rng::hermitian_with_spectrum_in(&mut r, n, 0.0, 1.0)).collect();
        for func in registry() {
            prop_assert!(jensen_check(*func, &t, &a_list).unwrap() >= -1e-8);
        }
    }
}
