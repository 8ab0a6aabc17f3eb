use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use transfer_lab::corpus::{random_function, random_point, rng, CorpusShape};
use transfer_lab::local_field::{AdditiveCharacter, FieldParams, MultiplicativeCharacter, PAdicNumber};
use transfer_lab::schwartz::{
    fourier_transform, mellin_transform, mellin_transform_exact, oscillatory_integral, Ball, LaurentPoly, Measure,
    RationalFnT, SchwartzFunction,
};

fn params(p: u64) -> FieldParams {
    FieldParams::new(p, 12.min(transfer_lab::local_field::max_digits(p))).unwrap()
}

fn with_zero_balls() -> CorpusShape {
    CorpusShape { zero_ball_rate: 0.25, ..CorpusShape::default() }
}

/// `int_B psi(x y) dx` by summing over the sub-balls on which the phase is constant.
fn fourier_oracle(phi: &SchwartzFunction, y: &PAdicNumber, psi: &AdditiveCharacter) -> Complex64 {
    let q = phi.params().q() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, c) in phi.terms() {
        let need = y.valuation().map_or(b.radius(), |v| psi.conductor() - v).max(b.radius());
        let depth = (need - b.radius()) as u32;
        for sub in b.subdivide(depth).unwrap() {
            let x = *sub.center();
            let phase = psi.eval_complex(&x.mul(y).unwrap()).unwrap();
            acc += c * phase * q.powi(-(sub.radius() as i32));
        }
    }
    acc
}

/// Brute-force residue sum for `int Phi(x) psi(c/x) chi(x) dx` two digits past
/// the depth at which the integrand is constant.
fn oscillatory_oracle(
    phi: &SchwartzFunction,
    c: &PAdicNumber,
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
) -> Complex64 {
    let q = phi.params().q() as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, coeff) in phi.terms() {
        let k = b.valuation().unwrap();
        let j = psi.conductor() - c.valuation().unwrap() + k;
        let fine = (k + j.max(chi.level() as i64) + 2).max(b.radius() + 1);
        for sub in b.subdivide((fine - b.radius()) as u32).unwrap() {
            let x = *sub.center();
            let v = psi.eval_complex(&c.div(&x).unwrap()).unwrap() * chi.eval(&x).unwrap();
            acc += coeff * v * q.powi(-(sub.radius() as i32));
        }
    }
    acc
}

#[test]
fn normalize_is_idempotent_and_pointwise_faithful() {
    for p in [2, 3, 5] {
        let f = params(p);
        let mut r = rng(11 + p);
        for _ in 0..30 {
            let terms = (0..4)
                .map(|_| {
                    let b = transfer_lab::corpus::random_ball(&mut r, f, &with_zero_balls());
                    (b, transfer_lab::corpus::random_coeff(&mut r))
                })
                .collect();
            let raw = SchwartzFunction::new(f, terms).unwrap();
            let n = raw.normalize();
            assert_eq!(n.normalize().structural_distance(&n), Some(0.0));
            for _ in 0..200 {
                let x = random_point(&mut r, f, -3, 4);
                let d = raw.evaluate(&x).unwrap() - n.evaluate(&x).unwrap();
                assert!(d.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn normalized_units_split_evaluates_zero_on_p() {
    let f = params(7);
    let phi = SchwartzFunction::new(
        f,
        vec![
            (Ball::around_zero(f, 0), Complex64::new(1.0, 0.0)),
            (Ball::around_zero(f, 1), Complex64::new(-1.0, 0.0)),
        ],
    )
    .unwrap()
    .normalize();
    assert_eq!(phi.terms().len(), 6);
    assert_eq!(phi.evaluate(&PAdicNumber::from_int(f, 7)).unwrap(), Complex64::new(0.0, 0.0));
}

#[test]
fn fourier_of_shifted_ball_matches_residue_oracle() {
    let f = params(3);
    let psi = AdditiveCharacter::standard(f);
    let phi = SchwartzFunction::indicator(Ball::new(PAdicNumber::one(f), 1).unwrap());
    let g = fourier_transform(&phi, &psi).unwrap();
    assert_eq!(g.terms().len(), 3);
    let mut r = rng(5);
    for _ in 0..300 {
        let y = random_point(&mut r, f, -3, 2);
        assert!((g.evaluate(&y).unwrap() - fourier_oracle(&phi, &y, &psi)).norm() < 1e-13);
    }
}

#[test]
fn fourier_matches_oracle_on_corpus() {
    for p in [2, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(100 + p);
        for _ in 0..20 {
            let phi = random_function(&mut r, f, &with_zero_balls());
            let g = fourier_transform(&phi, &psi).unwrap();
            for _ in 0..30 {
                let y = random_point(&mut r, f, -4, 3);
                assert!((g.evaluate(&y).unwrap() - fourier_oracle(&phi, &y, &psi)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn fourier_involution_and_plancherel() {
    for p in [2, 3, 5] {
        let f = params(p);
        let mut r = rng(200 + p);
        for conductor in [0, 1, -1] {
            let psi = AdditiveCharacter::with_conductor(f, conductor);
            let q = p as f64;
            for _ in 0..34 {
                let phi = random_function(&mut r, f, &with_zero_balls());
                let g = fourier_transform(&phi, &psi).unwrap();
                let gg = fourier_transform(&g, &psi).unwrap().scale(Complex64::new(q.powi(conductor as i32), 0.0));
                let d = gg.structural_distance(&phi.reflect()).expect("same ball decomposition");
                assert!(d < 1e-12);
                if conductor == 0 {
                    let l2 = |h: &SchwartzFunction| h.terms().iter().map(|(b, c)| c.norm_sqr() * b.volume()).sum::<f64>();
                    assert!((l2(&phi) - l2(&g)).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn mellin_examples() {
    for p in [2, 3, 5, 7] {
        let f = params(p);
        let basic = SchwartzFunction::indicator(Ball::around_zero(f, 0));
        let z = mellin_transform_exact(&basic, &MultiplicativeCharacter::unramified_quadratic(f)).unwrap();
        // signed geometric series: sum (-t)^k
        let mut partial = LaurentPoly::zero();
        for k in 0..12 {
            partial = partial.add(&LaurentPoly::monomial(transfer_lab::schwartz::exact(if k % 2 == 0 { 1 } else { -1 }, 1), k));
        }
        let t = Complex64::new(0.05, 0.02);
        let series = RationalFnT::from_poly(partial).eval(t);
        assert!((z.eval(t) - series).norm() < 1e-14);
    }
}

#[test]
fn mellin_multiplicativity() {
    for p in [2, 3, 5] {
        let f = params(p);
        let mut r = rng(300 + p);
        let chis = [
            MultiplicativeCharacter::trivial(f),
            MultiplicativeCharacter::unramified_quadratic(f),
            MultiplicativeCharacter::ramified_quadratic(f),
        ];
        for chi in &chis {
            for _ in 0..15 {
                let phi = random_function(&mut r, f, &with_zero_balls());
                let a = random_point(&mut r, f, -2, 2);
                let lhs = mellin_transform(&phi.translate_mult(&a).unwrap(), chi).unwrap();
                let rhs = mellin_transform(&phi, chi).unwrap().shift(a.valuation().unwrap()).scale(&chi.eval(&a).unwrap());
                assert!(lhs.equals(&rhs));
            }
        }
    }
}

#[test]
fn mellin_matches_truncated_sum() {
    let f = params(3);
    let mut r = rng(9);
    let chi = MultiplicativeCharacter::unramified_quadratic(f);
    for _ in 0..20 {
        let phi = random_function(&mut r, f, &with_zero_balls());
        let m = mellin_transform(&phi, &chi).unwrap();
        // at t = q^{-s} with s = 2: sum over shells of int Phi chi |x|^s d^x x
        let s = 2.0;
        let t = Complex64::new(3f64.powf(-s), 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -4..40 {
            let shell = SchwartzFunction::shell(f, k);
            let mut z = Complex64::new(0.0, 0.0);
            for (b, _) in shell.terms() {
                for sub in b.subdivide((4 - k).max(2) as u32).unwrap() {
                    let c = sub.center();
                    let x = PAdicNumber::from_parts(f, k, c.unit(), f.precision()).unwrap();
                    let vol = 3f64.powi((k - sub.radius()) as i32) / (1.0 - 1.0 / 3.0);
                    z += phi.evaluate(&x).unwrap() * chi.eval(&x).unwrap() * x.abs().powf(s) * vol;
                }
            }
            acc += z;
        }
        assert!((m.eval(t) - acc).norm() < 1e-12);
    }
}

#[test]
fn oscillatory_matches_residue_oracle() {
    for p in [2, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(400 + p);
        let weights = [
            MultiplicativeCharacter::trivial(f),
            MultiplicativeCharacter::abs_power(f, Complex64::new(0.5, 0.0)),
            MultiplicativeCharacter::ramified_quadratic(f),
        ];
        for w in &weights {
            for _ in 0..15 {
                let phi = random_function(&mut r, f, &CorpusShape::default());
                let c = random_point(&mut r, f, -4, 2);
                let got = oscillatory_integral(&phi, &c, w, &psi).unwrap();
                assert!((got.value - oscillatory_oracle(&phi, &c, w, &psi)).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn pullback_inverse_twice_is_identity() {
    for p in [2, 3, 5] {
        let f = params(p);
        let mut r = rng(500 + p);
        for _ in 0..30 {
            let phi = random_function(&mut r, f, &CorpusShape::default());
            let g = phi.pullback_inverse().unwrap();
            assert!(g.pullback_inverse().unwrap().structural_distance(&phi).unwrap() < 1e-14);
            let a = phi.integrate(Measure::Additive).unwrap();
            assert!((g.integrate(Measure::Additive).unwrap() - a).norm() < 1e-13);
            for _ in 0..20 {
                let x = random_point(&mut r, f, -3, 3);
                let want = phi.evaluate(&x.inv().unwrap()).unwrap() * x.abs().powi(-2);
                assert!((g.evaluate(&x).unwrap() - want).norm() < 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn valuation_is_additive(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let f = params(p);
        let mut r = rng(seed);
        for _ in 0..50 {
            let x = random_point(&mut r, f, -20, 20);
            let y = random_point(&mut r, f, -20, 20);
            prop_assert_eq!(x.mul(&y).unwrap().valuation().unwrap(), x.valuation().unwrap() + y.valuation().unwrap());
        }
    }

    #[test]
    fn psi_is_exactly_additive(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(seed);
        let x = random_point(&mut r, f, -4, 2);
        let y = random_point(&mut r, f, -4, 2);
        let s = x.add(&y).unwrap();
        prop_assert_eq!(psi.eval(&s).unwrap(), psi.eval(&x).unwrap().mul(&psi.eval(&y).unwrap()));
    }

    #[test]
    fn characters_are_multiplicative(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>(), re in -1.0f64..1.0, im in -3.0f64..3.0) {
        let f = params(p);
        let mut r = rng(seed);
        let chis = [
            MultiplicativeCharacter::abs_power(f, Complex64::new(re, im)),
            MultiplicativeCharacter::ramified_quadratic(f),
            MultiplicativeCharacter::unramified_quadratic(f),
        ];
        let x = random_point(&mut r, f, -5, 5);
        let y = random_point(&mut r, f, -5, 5);
        for chi in &chis {
            let lhs = chi.eval(&x.mul(&y).unwrap()).unwrap();
            let rhs = chi.eval(&x).unwrap() * chi.eval(&y).unwrap();
            prop_assert!((lhs - rhs).norm() <= 1e-14 * lhs.norm().max(1.0));
        }
        for eta in &chis[1..] {
            prop_assert_eq!(eta.eval(&x).unwrap() * eta.eval(&x).unwrap(), Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn normalize_is_pointwise_faithful(p in prop::sample::select(vec![2u64, 3, 5]), seed in any::<u64>()) {
        let f = params(p);
        let mut r = rng(seed);
        let n = r.gen_range(1..5);
        let terms = (0..n).map(|_| (transfer_lab::corpus::random_ball(&mut r, f, &with_zero_balls()), transfer_lab::corpus::random_coeff(&mut r))).collect();
        let raw = SchwartzFunction::new(f, terms).unwrap();
        let norm = raw.normalize();
        for (i, (a, _)) in norm.terms().iter().enumerate() {
            for (b, _) in &norm.terms()[i + 1..] {
                prop_assert_eq!(a.relation(b).unwrap(), transfer_lab::schwartz::BallRelation::Disjoint);
            }
        }
        for _ in 0..40 {
            let x = random_point(&mut r, f, -3, 4);
            prop_assert!((raw.evaluate(&x).unwrap() - norm.evaluate(&x).unwrap()).norm() < 1e-12);
        }
    }
}
