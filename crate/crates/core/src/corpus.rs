//! Seeded random test data.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::local_field::{pow_u128, FieldParams, PAdicNumber};
use crate::schwartz::{Ball, SchwartzFunction};
use crate::transfer::SymSqTestData;

/// Shape of randomly drawn Schwartz functions.
#[derive(Debug, Clone, Copy)]
pub struct CorpusShape {
    pub max_balls: usize,
    pub min_valuation: i64,
    pub max_valuation: i64,
    pub max_depth: u32,
    /// Probability of a ball `p^k Z_p` around zero.
    pub zero_ball_rate: f64,
}

impl Default for CorpusShape {
    fn default() -> Self {
        CorpusShape { max_balls: 3, min_valuation: -1, max_valuation: 1, max_depth: 2, zero_ball_rate: 0.0 }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_unit(rng: &mut impl Rng, p: u64, digits: u32) -> u64 {
    let m = pow_u128(p, digits) as u64;
    loop {
        let u = rng.gen_range(1..m);
        if u % p != 0 {
            return u;
        }
    }
}

pub fn random_coeff(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A nonzero point with valuation in `[lo, hi]` and all carried digits random.
pub fn random_point(rng: &mut impl Rng, params: FieldParams, lo: i64, hi: i64) -> PAdicNumber {
    let v = rng.gen_range(lo..=hi);
    let n = params.precision();
    PAdicNumber::from_parts(params, v, random_unit(rng, params.p(), n), n).unwrap()
}

pub fn random_ball(rng: &mut impl Rng, params: FieldParams, shape: &CorpusShape) -> Ball {
    let k = rng.gen_range(shape.min_valuation..=shape.max_valuation);
    if rng.gen_bool(shape.zero_ball_rate) {
        return Ball::around_zero(params, k);
    }
    let depth = rng.gen_range(1..=shape.max_depth);
    let u = random_unit(rng, params.p(), depth);
    Ball::new(PAdicNumber::from_parts(params, k, u, depth).unwrap(), k + depth as i64).unwrap()
}

/// A normalized, nonzero Schwartz function with 1 to `max_balls` terms.
pub fn random_function(rng: &mut impl Rng, params: FieldParams, shape: &CorpusShape) -> SchwartzFunction {
    loop {
        let n = rng.gen_range(1..=shape.max_balls);
        let terms = (0..n).map(|_| (random_ball(rng, params, shape), random_coeff(rng))).collect();
        let phi = SchwartzFunction::new(params, terms).unwrap().normalize();
        if !phi.terms().is_empty() {
            return phi;
        }
    }
}

/// `count` functions drawn from a fixed seed.
pub fn seeded_corpus(params: FieldParams, seed: u64, count: usize, shape: &CorpusShape) -> Vec<SchwartzFunction> {
    let mut r = rng(seed);
    (0..count).map(|_| random_function(&mut r, params, shape)).collect()
}

/// Symmetric-square test data `sum c_i 1_{R_i} x 1_{S_i}` with every ball away from 0.
pub fn random_symsq_data(rng: &mut impl Rng, params: FieldParams, shape: &CorpusShape) -> SymSqTestData {
    let shape = CorpusShape { zero_ball_rate: 0.0, ..*shape };
    let n = rng.gen_range(1..=shape.max_balls);
    let terms = (0..n)
        .map(|_| (random_ball(rng, params, &shape), random_ball(rng, params, &shape), random_coeff(rng)))
        .collect();
    SymSqTestData { params, terms }
}
