use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

use transfer_lab::corpus::{random_function, random_point, random_symsq_data, rng, seeded_corpus, CorpusShape};
use transfer_lab::local_field::{AdditiveCharacter, FieldParams, MultiplicativeCharacter, PAdicNumber};
use transfer_lab::oracles::{symsq_brute_force, type_g_brute_force, type_t_brute_force};
use transfer_lab::schwartz::{fourier_transform, Ball, SchwartzFunction};
use transfer_lab::transfer::{
    inverse_transfer_g, inverse_transfer_t, transfer_g, transfer_sym_square, transfer_t, SymSqKernel, SymSqTestData,
    TransferKernelG, TransferKernelT, XTestData,
};
use transfer_lab::Error;

fn params(p: u64) -> FieldParams {
    FieldParams::new(p, 10).unwrap()
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn v4(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        0
    }
}

fn point(f: FieldParams, v: i64, u: u64) -> PAdicNumber {
    PAdicNumber::from_parts(f, v, u, f.precision()).unwrap()
}

#[test]
fn type_g_units_example() {
    for p in [2u64, 3, 5, 7] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let q = p as f64;
        let k = TransferKernelG::new(3).unwrap();
        let phi = SchwartzFunction::shell(f, 0);
        let out = transfer_g(&phi, &k, &psi).unwrap();
        let want = SchwartzFunction::indicator(Ball::around_zero(f, 0))
            .scale(real(1.0 - 1.0 / q))
            .sub(&SchwartzFunction::shell(f, -1).scale(real(1.0 / q)));
        assert!(out.structural_distance(&want).unwrap() < 1e-14, "p = {p}");
        for v in -3..3 {
            let t0 = point(f, v, 1 + p);
            let got = out.evaluate(&t0).unwrap();
            assert!((got - type_g_brute_force(&phi, &k, &psi, &t0).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn type_g_shifted_units_example() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let q = p as f64;
        let k = TransferKernelG::new(3).unwrap();
        let phi = SchwartzFunction::shell(f, 1);
        let out = transfer_g(&phi, &k, &psi).unwrap();
        let want = SchwartzFunction::indicator(Ball::around_zero(f, 1))
            .scale(real((1.0 - 1.0 / q) / q))
            .sub(&SchwartzFunction::shell(f, 0).scale(real(1.0 / (q * q))));
        assert!(out.structural_distance(&want).unwrap() < 1e-14, "p = {p}");
        for v in -2..4 {
            let t0 = point(f, v, p - 1);
            let got = out.evaluate(&t0).unwrap();
            assert!((got - type_g_brute_force(&phi, &k, &psi, &t0).unwrap()).norm() < 1e-12);
        }
    }
}

#[test]
fn type_g_matches_brute_force_on_corpus() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(11 + p);
        for d in [3, 5, 7] {
            let k = TransferKernelG::new(d).unwrap();
            for phi in seeded_corpus(f, 100 * p + d as u64, 4, &CorpusShape::default()) {
                let out = transfer_g(&phi, &k, &psi).unwrap();
                for _ in 0..6 {
                    let t0 = random_point(&mut r, f, -5, 2);
                    let want = type_g_brute_force(&phi, &k, &psi, &t0).unwrap();
                    assert!((out.evaluate(&t0).unwrap() - want).norm() < 1e-10, "p = {p}, d = {d}");
                }
            }
        }
    }
}

#[test]
fn type_g_collapses_to_fourier_at_d3() {
    let k = TransferKernelG::new(3).unwrap();
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        for phi in seeded_corpus(f, 7 + p, 10, &CorpusShape::default()) {
            let lhs = transfer_g(&phi, &k, &psi).unwrap();
            let rhs = fourier_transform(&phi.pullback_inverse().unwrap(), &psi).unwrap();
            assert!(lhs.structural_distance(&rhs).unwrap() <= 1e-12);
        }
    }
}

#[test]
fn type_g_dilation_covariance() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let q = p as f64;
        let inv_p = PAdicNumber::p_power(f, -1);
        for d in [3u32, 5, 7] {
            let k = TransferKernelG::new(d).unwrap();
            for phi in seeded_corpus(f, 31 * p + d as u64, 5, &CorpusShape::default()) {
                let dilated = transfer_g(&phi.translate_mult(&inv_p).unwrap(), &k, &psi).unwrap();
                let want = transfer_g(&phi, &k, &psi)
                    .unwrap()
                    .translate_mult(&inv_p)
                    .unwrap()
                    .scale(real(q.powf((d as f64 - 1.0) / 2.0)));
                let scale = want.terms().iter().map(|t| t.1.norm()).fold(1.0, f64::max);
                assert!(dilated.structural_distance(&want).unwrap() <= 1e-12 * scale);
            }
        }
    }
}

#[test]
fn type_g_round_trip() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        for d in [3, 5, 7] {
            let k = TransferKernelG::new(d).unwrap();
            for phi in seeded_corpus(f, 1000 + p + d as u64, 5, &CorpusShape::default()) {
                let back = inverse_transfer_g(&transfer_g(&phi, &k, &psi).unwrap(), &k, &psi).unwrap();
                assert!(back.sup_distance(&phi) <= 1e-10, "p = {p}, d = {d}");
            }
        }
    }
}

#[test]
fn type_g_rejects_functions_outside_image() {
    let f = params(3);
    let psi = AdditiveCharacter::standard(f);
    let k = TransferKernelG::new(3).unwrap();
    let bump = SchwartzFunction::indicator(Ball::new(point(f, 0, 1), 1).unwrap());
    assert!(matches!(inverse_transfer_g(&bump, &k, &psi), Err(Error::NotInImage { .. })));
    assert!(transfer_g(&SchwartzFunction::shell(f, 0).add(&bump), &k, &psi).is_ok());
    let at_zero = SchwartzFunction::indicator(Ball::around_zero(f, 0));
    assert!(matches!(transfer_g(&at_zero, &k, &psi), Err(Error::SupportAtZero)));
}

#[test]
fn type_t_units_at_valuation_of_four() {
    let k = TransferKernelT::new(2, 2).unwrap();
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let phi = SchwartzFunction::shell(f, 0);
        let out = transfer_t(&phi, &k, &psi).unwrap();
        let mut r = rng(p);
        for _ in 0..4 {
            let c = random_point(&mut r, f, v4(p), v4(p));
            let want = type_t_brute_force(&phi, &k, &psi, &c).unwrap();
            assert!((out.f.evaluate(&c).unwrap() - want).norm() <= 1e-10, "p = {p}");
        }
    }
}

#[test]
fn type_t_vanishes_below_cancellation_bound() {
    let k = TransferKernelT::new(2, 2).unwrap();
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let phi = SchwartzFunction::shell(f, 0);
        let out = transfer_t(&phi, &k, &psi).unwrap();
        let bound = v4(p) - 2;
        assert_eq!(out.window.unwrap().0, bound);
        for v in bound - 3..bound {
            let c = point(f, v, 1);
            assert_eq!(out.f.evaluate(&c).unwrap(), real(0.0));
            assert!(type_t_brute_force(&phi, &k, &psi, &c).unwrap().norm() <= 1e-12);
        }
        let edge = type_t_brute_force(&phi, &k, &psi, &point(f, bound, 1)).unwrap();
        assert!(edge.norm() > 1e-3);
    }
}

#[test]
fn type_t_matches_brute_force_on_corpus() {
    let shape = CorpusShape { max_balls: 2, max_depth: 1, ..CorpusShape::default() };
    for p in [2u64, 3] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(77 + p);
        for (d, dp) in [(2, 2), (4, 2), (4, 4)] {
            let k = TransferKernelT::new(d, dp).unwrap();
            for phi in seeded_corpus(f, 500 + p + d as u64 * 10 + dp as u64, 3, &shape) {
                let out = transfer_t(&phi, &k, &psi).unwrap();
                let (lo, hi) = out.window.unwrap();
                for _ in 0..3 {
                    let c = random_point(&mut r, f, lo, hi);
                    let want = type_t_brute_force(&phi, &k, &psi, &c).unwrap();
                    let got = out.f.evaluate(&c).unwrap();
                    assert!((got - want).norm() <= 1e-10 * want.norm().max(1.0), "p = {p}, ({d}, {dp})");
                }
            }
        }
    }
}

#[test]
fn type_t_round_trip() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        for (d, dp) in [(2, 2), (4, 2), (4, 4)] {
            let k = TransferKernelT::new(d, dp).unwrap();
            for phi in seeded_corpus(f, 2000 + p + d as u64 * 10 + dp as u64, 4, &CorpusShape::default()) {
                let back = inverse_transfer_t(&transfer_t(&phi, &k, &psi).unwrap(), &k, &psi).unwrap();
                assert!(back.sup_distance(&phi) <= 1e-10, "p = {p}, ({d}, {dp})");
            }
        }
    }
}

#[test]
fn type_t_zero_and_rejection() {
    let f = params(3);
    let psi = AdditiveCharacter::standard(f);
    let k = TransferKernelT::new(4, 2).unwrap();
    let zero = transfer_t(&SchwartzFunction::zero(f), &k, &psi).unwrap();
    assert!(zero.f.is_zero());
    assert!(inverse_transfer_t(&zero, &k, &psi).unwrap().is_zero());
    let bump = XTestData { f: SchwartzFunction::shell(f, 0), window: Some((-2, 2)) };
    assert!(matches!(inverse_transfer_t(&bump, &k, &psi), Err(Error::NotInImage { .. })));
}

fn unit_balls(f: FieldParams) -> Vec<Ball> {
    SchwartzFunction::shell(f, 0).terms().iter().map(|t| t.0).collect()
}

fn units_tensor(f: FieldParams) -> SymSqTestData {
    let units = unit_balls(f);
    let terms = units.iter().flat_map(|r| units.iter().map(move |s| (*r, *s, real(1.0)))).collect();
    SymSqTestData { params: f, terms }
}

#[test]
fn symsq_units_example() {
    for p in [2u64, 3, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let k = SymSqKernel::new(MultiplicativeCharacter::unramified_quadratic(f), None).unwrap();
        let data = units_tensor(f);
        let out = transfer_sym_square(&data, &k, &psi).unwrap();
        let mut r = rng(p);
        for _ in 0..4 {
            let t = random_point(&mut r, f, 0, 0);
            let want = symsq_brute_force(&data, &k, &psi, &t).unwrap();
            assert!((out.f.evaluate(&t).unwrap() - want).norm() <= 1e-10, "p = {p}");
        }
    }
}

#[test]
fn symsq_matches_brute_force_on_corpus() {
    for p in [3u64, 5] {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let mut r = rng(900 + p);
        let etas = [
            MultiplicativeCharacter::unramified_quadratic(f),
            MultiplicativeCharacter::ramified_quadratic(f),
        ];
        for eta in etas {
            let k = SymSqKernel::new(eta, None).unwrap();
            for _ in 0..3 {
                let data = random_symsq_data(&mut r, f, &CorpusShape::default());
                let out = transfer_sym_square(&data, &k, &psi).unwrap();
                let (lo, hi) = out.window.unwrap();
                for _ in 0..3 {
                    let t = random_point(&mut r, f, lo, hi);
                    let want = symsq_brute_force(&data, &k, &psi, &t).unwrap();
                    assert!((out.f.evaluate(&t).unwrap() - want).norm() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn symsq_invariant_under_inversion_of_split_torus() {
    let f = params(5);
    let psi = AdditiveCharacter::standard(f);
    let k = SymSqKernel::new(MultiplicativeCharacter::unramified_quadratic(f), None).unwrap();
    let mut r = rng(4);
    let data = random_symsq_data(&mut r, f, &CorpusShape::default());
    let out = transfer_sym_square(&data, &k, &psi).unwrap();
    let lift = |a: &PAdicNumber| out.f.evaluate(&a.add(&a.inv().unwrap()).unwrap()).unwrap();
    for _ in 0..50 {
        let a = random_point(&mut r, f, -3, 3);
        assert_eq!(lift(&a), lift(&a.inv().unwrap()));
    }
}

#[test]
fn symsq_zero_and_germ() {
    let f = params(3);
    let psi = AdditiveCharacter::standard(f);
    let k = SymSqKernel::new(MultiplicativeCharacter::unramified_quadratic(f), None).unwrap();
    let empty = SymSqTestData { params: f, terms: vec![] };
    assert!(transfer_sym_square(&empty, &k, &psi).unwrap().f.is_zero());
    let units = unit_balls(f)[0];
    let germ = SymSqTestData { params: f, terms: vec![(units, Ball::around_zero(f, 0), real(1.0))] };
    assert!(matches!(transfer_sym_square(&germ, &k, &psi), Err(Error::UnsupportedGerm)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn type_g_is_linear(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5]), d in prop::sample::select(vec![3u32, 5])) {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let k = TransferKernelG::new(d).unwrap();
        let mut r = rng(seed);
        let a = random_function(&mut r, f, &CorpusShape::default());
        let b = random_function(&mut r, f, &CorpusShape::default());
        let z = Complex64::new(r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0));
        let lhs = transfer_g(&a.scale(z).add(&b), &k, &psi).unwrap();
        let rhs = transfer_g(&a, &k, &psi).unwrap().scale(z).add(&transfer_g(&b, &k, &psi).unwrap());
        prop_assert!(lhs.sup_distance(&rhs) <= 1e-10);
    }

    #[test]
    fn type_g_output_vanishes_below_support_bound(seed in any::<u64>(), p in prop::sample::select(vec![2u64, 3, 5])) {
        let f = params(p);
        let psi = AdditiveCharacter::standard(f);
        let phi = random_function(&mut rng(seed), f, &CorpusShape::default());
        let out = transfer_g(&phi, &TransferKernelG::new(3).unwrap(), &psi).unwrap();
        let depth = phi.terms().iter().map(|(b, _)| b.radius() - b.valuation().unwrap()).max().unwrap();
        let kmax = phi.terms().iter().map(|(b, _)| b.valuation().unwrap().abs()).max().unwrap();
        for (b, _) in out.terms() {
            prop_assert!(b.valuation().unwrap_or(b.radius()) >= -(depth + kmax + 1));
        }
    }
}
