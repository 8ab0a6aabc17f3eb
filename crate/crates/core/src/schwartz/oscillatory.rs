//! Exact integrals of `psi(phase(x)) chi(x) dx` over balls, by refinement to
//! the depth at which every factor is constant.

use num_complex::Complex64;

use super::ball::Ball;
use super::function::SchwartzFunction;
use crate::error::{Error, Result};
use crate::local_field::{inv_mod, pow_u128, AdditiveCharacter, MultiplicativeCharacter, PAdicNumber};

/// Largest number of residue classes enumerated for one ball.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// The argument fed to the additive character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Phase {
    None,
    /// `x -> b x`
    Linear(PAdicNumber),
    /// `x -> c / x`
    Inverse(PAdicNumber),
}

impl Phase {
    fn normalized(self) -> Phase {
        match self {
            Phase::Linear(b) | Phase::Inverse(b) if b.is_zero() => Phase::None,
            other => other,
        }
    }
}

/// Value of an exact oscillatory integral with its refinement statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseIntegral {
    pub value: Complex64,
    /// Finest multiplicative depth `L` used, cells being `p^k u (1 + p^L)`.
    pub depth: u32,
    /// Number of residue classes summed.
    pub cells: u128,
}

impl PhaseIntegral {
    fn zero() -> Self {
        PhaseIntegral { value: Complex64::new(0.0, 0.0), depth: 0, cells: 0 }
    }

    fn absorb(&mut self, other: PhaseIntegral, coeff: Complex64) {
        self.value += coeff * other.value;
        self.depth = self.depth.max(other.depth);
        self.cells += other.cells;
    }
}

/// `int_B psi(phase(x)) chi(x) dx` exactly.
pub fn ball_phase_integral(
    ball: &Ball,
    phase: Phase,
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    budget: u128,
) -> Result<PhaseIntegral> {
    let phase = phase.normalized();
    match ball.valuation() {
        Some(_) => cell_sum(ball, phase, chi, psi, budget),
        None => zero_ball(ball.radius(), phase, chi, psi, budget),
    }
}

/// Depth `j` at which the phase on the shell `v(x) = k` becomes nontrivial.
fn phase_depth(phase: &Phase, k: i64, conductor: i64) -> i64 {
    match phase {
        Phase::None => 0,
        Phase::Linear(b) => conductor - b.valuation().unwrap() - k,
        Phase::Inverse(c) => conductor - c.valuation().unwrap() + k,
    }
}

fn cell_sum(
    ball: &Ball,
    phase: Phase,
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    budget: u128,
) -> Result<PhaseIntegral> {
    let p = ball.p();
    let q = p as f64;
    let k = ball.valuation().unwrap();
    let (ua, w) = ball.unit_class().unwrap();
    let m = chi.level();
    let j = phase_depth(&phase, k, psi.conductor());
    if j > m.max(w) as i64 && j >= 2 {
        return Ok(PhaseIntegral { value: Complex64::new(0.0, 0.0), depth: j as u32, cells: 0 });
    }
    let j = j.max(0) as u32;
    let depth = w.max(m).max(j);
    let count = pow_u128(p, depth - w);
    if count > budget {
        return Err(Error::RefinementOverflow { needed: count, budget });
    }
    let (phase_val, phase_unit) = match phase {
        Phase::None => (0, 0),
        Phase::Linear(b) | Phase::Inverse(b) => {
            if b.precision() < j {
                return Err(Error::InsufficientPrecision { needed: j as i64, available: b.precision() as i64 });
            }
            (b.valuation().unwrap(), b.unit() as u128)
        }
    };
    let modj = pow_u128(p, j);
    let step = pow_u128(p, w);
    let base = ua % step;
    let mut sum = Complex64::new(0.0, 0.0);
    for i in 0..count {
        let u = base + step * i;
        let mut term = chi.unit_value(u);
        if j > 0 {
            let root = match phase {
                Phase::Linear(_) => psi.phase(phase_val + k, (phase_unit * (u % modj)) % modj),
                Phase::Inverse(_) => {
                    let inv = inv_mod(u % modj, modj).expect("unit residue");
                    psi.phase(phase_val - k, (phase_unit * inv) % modj)
                }
                Phase::None => unreachable!(),
            };
            term *= root.to_complex();
        }
        sum += term;
    }
    let scale = chi.power_value(k) * q.powi(-(k as i32) - depth as i32);
    Ok(PhaseIntegral { value: sum * scale, depth, cells: count })
}

/// The integral over `p^r Z_p`, split into shells. Shells beyond the
/// oscillation cutoff vanish exactly; a non-oscillating tail is summed in
/// closed form.
fn zero_ball(
    r: i64,
    phase: Phase,
    chi: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    budget: u128,
) -> Result<PhaseIntegral> {
    let params = chi.params();
    let p = params.p();
    let q = p as f64;
    let m = chi.level() as i64;
    let (stop, tail) = match phase {
        Phase::Inverse(c) => (c.valuation().unwrap() - psi.conductor() + (m + 1).max(2), false),
        Phase::Linear(b) => ((psi.conductor() - b.valuation().unwrap()).max(r), true),
        Phase::None => (r, true),
    };
    let mut out = PhaseIntegral::zero();
    let one = Complex64::new(1.0, 0.0);
    for k in r..stop {
        for u in 1..p {
            let b = Ball::new(PAdicNumber::from_parts(params, k, u, 1)?, k + 1)?;
            out.absorb(cell_sum(&b, phase, chi, psi, budget)?, one);
        }
    }
    if tail {
        let tau = chi.unit_average();
        if tau.norm() > 0.0 {
            let ratio = chi.power_value(1) / q;
            if ratio.norm() >= 1.0 {
                return Err(Error::NonIntegrable);
            }
            let start = stop.max(r);
            let first = chi.power_value(start) * q.powi(-(start as i32));
            out.value += tau * (1.0 - 1.0 / q) * first / (1.0 - ratio);
        }
    }
    Ok(out)
}

/// `int Phi(x) psi(c/x) chi(x) dx`; the character factor is dropped when
/// `c = 0`.
pub fn oscillatory_integral(
    phi: &SchwartzFunction,
    c: &PAdicNumber,
    weight: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
) -> Result<PhaseIntegral> {
    oscillatory_integral_with_budget(phi, c, weight, psi, DEFAULT_BUDGET)
}

pub fn oscillatory_integral_with_budget(
    phi: &SchwartzFunction,
    c: &PAdicNumber,
    weight: &MultiplicativeCharacter,
    psi: &AdditiveCharacter,
    budget: u128,
) -> Result<PhaseIntegral> {
    let mut out = PhaseIntegral::zero();
    for (b, coeff) in phi.normalize().terms() {
        out.absorb(ball_phase_integral(b, Phase::Inverse(*c), weight, psi, budget)?, *coeff);
    }
    Ok(out)
}
