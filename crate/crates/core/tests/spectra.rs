use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;
use transfer_lab::corpus::rng;
use transfer_lab::local_field::{AdditiveCharacter, FieldParams, MultiplicativeCharacter};
use transfer_lab::schwartz::{mellin_transform, Ball, SchwartzFunction};
use transfer_lab::spectra::*;
use transfer_lab::Error;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sat(theta: f64, q: f64) -> SatakeParameter {
    SatakeParameter::tempered(theta, q).unwrap()
}

#[test]
fn spherical_normalization_and_trivial_representation() {
    for q in [2.0, 3.0, 5.0] {
        assert!((spherical_function(&sat(0.7, q), 0) - 1.0).norm() < 1e-14);
        let trivial = SatakeParameter::new(c(q.sqrt(), 0.0), q).unwrap();
        for n in 0..=30 {
            assert!((spherical_function(&trivial, n) - 1.0).norm() < 1e-12);
        }
    }
}

#[test]
fn spherical_matches_sphere_average_and_recurrence() {
    let mut r = rng(11);
    for q in [2.0, 5.0] {
        for _ in 0..100 {
            let s = sat(r.gen_range(0.0..2.0 * PI), q);
            for n in 0..=30 {
                assert!((spherical_function(&s, n) - spherical_sphere_average(&s, n)).norm() < 1e-10);
                assert!(spherical_hecke_residual(&s, n) < 1e-10);
            }
        }
    }
}

#[test]
fn whittaker_support_normalization_and_coset_sum() {
    let mut r = rng(12);
    for p in [2u64, 5] {
        let psi = AdditiveCharacter::standard(FieldParams::new(p, 10).unwrap());
        for _ in 0..100 {
            let s = sat(r.gen_range(0.0..2.0 * PI), p as f64);
            assert_eq!(whittaker_function(&s, -1), c(0.0, 0.0));
            assert!((whittaker_function(&s, 0) - 1.0).norm() < 1e-12);
            for n in -1..=30 {
                assert!(whittaker_hecke_residual(&s, n, &psi).unwrap() < 1e-10);
            }
        }
    }
}

#[test]
fn degenerate_parameters_are_flagged() {
    let s = sat(PI, 3.0);
    assert_eq!(whittaker_function_strict(&s, 2), Err(Error::DegenerateParameter));
    assert!((whittaker_function(&s, 2) - 3.0 / 3.0).norm() < 1e-12);
    assert!(spherical_hecke_residual(&s, 4) < 1e-12);
}

#[test]
fn l_factor_examples() {
    let q = 3.0;
    let s = c(0.8, 0.3);
    let t = Complex64::from(q).powc(-s);
    let one = SatakeParameter::new(c(1.0, 0.0), q).unwrap();
    let std = l_factor(&one, &LFactorSpec::Std, s).unwrap();
    assert!((std - 1.0 / ((1.0 - t) * (1.0 - t))).norm() < 1e-12);

    let g = SatakeParameter::new(c(0.3, 1.1), q).unwrap();
    let a2 = g.alpha * g.alpha;
    let want = 1.0 / ((1.0 - a2 * t) * (1.0 - t) * (1.0 - t / a2));
    assert!((l_factor(&g, &LFactorSpec::Adjoint, s).unwrap() - want).norm() < 1e-12);
    assert_eq!(LFactorSpec::Sym2.weights(), LFactorSpec::Adjoint.weights());
}

#[test]
fn gl1_factor_is_the_mellin_transform_of_the_unit_ball() {
    for p in [2u64, 3, 5, 7] {
        let params = FieldParams::new(p, 10).unwrap();
        let zp = SchwartzFunction::indicator(Ball::around_zero(params, 0));
        let m = mellin_transform(&zp, &MultiplicativeCharacter::trivial(params)).unwrap();
        let sigma = SatakeParameter::new(c(1.0, 0.0), p as f64).unwrap();
        for s in [c(0.5, 0.0), c(1.3, -2.0), c(2.0, 0.7)] {
            let t = Complex64::from(p as f64).powc(-s);
            assert!((l_factor(&sigma, &LFactorSpec::Trivial, s).unwrap() - m.eval(t)).norm() < 1e-12);
        }
    }
}

#[test]
fn l_factor_pole() {
    let one = SatakeParameter::new(c(1.0, 0.0), 5.0).unwrap();
    assert!(matches!(l_factor(&one, &LFactorSpec::Trivial, c(0.0, 0.0)), Err(Error::PoleAt(_))));
}

#[test]
fn plancherel_density_examples() {
    for q in [2.0, 3.0, 5.0] {
        assert_eq!(plancherel_density(&sat(0.0, q)).unwrap(), 0.0);
        assert!(plancherel_density(&sat(PI, q)).unwrap() < 1e-15);
        let at_i = plancherel_density(&sat(PI / 2.0, q)).unwrap();
        assert!((at_i - 4.0 / (1.0 + 1.0 / q).powi(2)).abs() < 1e-12);
    }
    let outside = SatakeParameter::new(c(2.0, 0.0), 5.0).unwrap();
    assert_eq!(plancherel_density(&outside), Err(Error::NonTempered));
    assert_eq!(torus_period(&outside, 10).unwrap_err(), Error::NonTempered);
}

#[test]
fn torus_period_converges() {
    let s = sat(0.0, 5.0);
    let a = torus_period(&s, 60).unwrap();
    let b = torus_period(&s, 120).unwrap();
    assert!((a.value - b.value).norm() <= 1e-9);
    assert!((a.value - b.value).norm() <= a.certified_tail);
    let m = torus_period(&sat(PI, 5.0), 60).unwrap().value;
    let m_inv = torus_period(&sat(PI, 5.0).inverse(), 60).unwrap().value;
    assert!((m - m_inv).norm() < 1e-12);
}

#[test]
fn lvalue_quotient_at_one() {
    for q in [2.0f64, 3.0, 5.0] {
        let got = lvalue_quotient(&sat(0.0, q)).unwrap();
        let want = (1.0 - 1.0 / q).powi(3) / (1.0 - q.powf(-0.5)).powi(4);
        assert!((got - want).norm() < 1e-12 * want);
    }
}

#[test]
fn period_ratio_is_constant_once_the_tail_is_negligible() {
    for (q, n) in [(3.0, 60), (5.0, 60), (2.0, 200)] {
        let check = period_check(q, n, &reference_alphas()).unwrap();
        assert!(check.max_relative_deviation <= 1e-8, "q={q}: {}", check.max_relative_deviation);
        assert!(check.constant.im.abs() < 1e-10);
    }
}

#[test]
fn plancherel_inversion_recovers_unit_mass() {
    for q in [2.0, 5.0] {
        let r = plancherel_inversion_check(q, 2048).unwrap();
        assert!(r.residual <= 1e-6);
        assert_eq!(r.target, 1.0);
        let coarse = plancherel_inversion_check(q, 64).unwrap();
        assert!(coarse.refined_residual <= coarse.residual.max(QUADRATURE_FLOOR));
    }
    assert!(matches!(plancherel_inversion_check(5.0, 32), Err(Error::InvalidParameter(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn outputs_are_weyl_invariant(theta in 0.0..2.0 * PI, qi in 0usize..3, n in 0u32..12) {
        let q = [2.0, 3.0, 5.0][qi];
        let s = sat(theta, q);
        let t = s.inverse();
        prop_assert!((spherical_function(&s, n) - spherical_function(&t, n)).norm() < 1e-12);
        prop_assert!((whittaker_function(&s, n as i64) - whittaker_function(&t, n as i64)).norm() < 1e-12);
        prop_assert!((plancherel_density(&s).unwrap() - plancherel_density(&t).unwrap()).abs() < 1e-12);
        let (ls, lt) = (lvalue_quotient(&s).unwrap(), lvalue_quotient(&t).unwrap());
        prop_assert!((ls - lt).norm() < 1e-12 * ls.norm().max(1.0));
        for spec in [LFactorSpec::Std, LFactorSpec::Adjoint, LFactorSpec::QuotientSpec] {
            let x = l_factor(&s, &spec, c(1.0, 0.0)).unwrap();
            let y = l_factor(&t, &spec, c(1.0, 0.0)).unwrap();
            prop_assert!((x - y).norm() < 1e-12 * x.norm().max(1.0));
        }
    }

    #[test]
    fn tempered_outputs_are_positive_and_real(theta in 0.0..2.0 * PI, qi in 0usize..3) {
        let q = [2.0, 3.0, 5.0][qi];
        let s = sat(theta, q);
        prop_assert!(plancherel_density(&s).unwrap() >= 0.0);
        prop_assert!(torus_period(&s, 60).unwrap().value.im.abs() < 1e-10);
        for n in 0..20 {
            prop_assert!(spherical_function(&s, n).im.abs() < 1e-10);
        }
    }
}
