use num_complex::Complex64;

use super::XTestData;
use crate::error::{Error, Result};
use crate::local_field::{pow_u128, AdditiveCharacter, FieldParams, MultiplicativeCharacter, PAdicNumber};
use crate::schwartz::{ball_phase_integral, Ball, Phase, SchwartzFunction, DEFAULT_BUDGET};

/// Quadratic character and constant of the symmetric-square operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSqKernel {
    pub eta: MultiplicativeCharacter,
    pub lambda: Option<Complex64>,
}

impl SymSqKernel {
    pub fn new(eta: MultiplicativeCharacter, lambda: Option<Complex64>) -> Result<Self> {
        if !eta.is_real_sign() {
            return Err(Error::InvalidParameter("eta must be quadratic".into()));
        }
        Ok(SymSqKernel { eta, lambda })
    }

    pub fn lambda(&self, psi: &AdditiveCharacter) -> Result<Complex64> {
        match self.lambda {
            Some(l) => Ok(l),
            None => default_lambda(&self.eta, psi),
        }
    }
}

/// `lim_B int_{v(x) >= -B} eta(x) psi(x) dx`, taken once two consecutive
/// truncations agree.
pub fn default_lambda(eta: &MultiplicativeCharacter, psi: &AdditiveCharacter) -> Result<Complex64> {
    let params = eta.params();
    let mut prev: Option<Complex64> = None;
    for b in 0..40 {
        let ball = Ball::around_zero(params, psi.conductor() - b);
        let v = ball_phase_integral(&ball, Phase::Linear(PAdicNumber::one(params)), eta, psi, DEFAULT_BUDGET)?.value;
        if let Some(pv) = prev {
            if (v - pv).norm() <= 1e-15 * v.norm().max(1.0) && b > eta.level() as i64 + 1 {
                return Ok(v);
            }
        }
        prev = Some(v);
    }
    Err(Error::QuadratureUnstable)
}

/// `f(r, s) = sum c_i 1_{R_i}(r) 1_{S_i}(s)` on `F^x x F^x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSqTestData {
    pub params: FieldParams,
    pub terms: Vec<(Ball, Ball, Complex64)>,
}

impl SymSqTestData {
    pub fn evaluate(&self, r: &PAdicNumber, s: &PAdicNumber) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (br, bs, c) in &self.terms {
            if br.contains_point(r)? && bs.contains_point(s)? {
                acc += c;
            }
        }
        Ok(acc)
    }
}

/// `int_B eta(r) d^x r` for a ball away from 0.
fn mult_mass(ball: &Ball, eta: &MultiplicativeCharacter) -> Complex64 {
    let p = ball.p();
    let k = ball.valuation().unwrap();
    let (u, w) = ball.unit_class().unwrap();
    let level = w.max(eta.level());
    let step = pow_u128(p, w);
    let n = pow_u128(p, level - w);
    let s: Complex64 = (0..n).map(|i| eta.unit_value(u % step + step * i)).sum();
    let modulus = pow_u128(p, level);
    eta.power_value(k) * s / (modulus - modulus / p as u128) as f64
}

/// `g(t) = lambda eta(t) sum_i c_i int_{R_i} eta(r) d^x r int_{t S_i^{-1}} eta(x) psi(x) dx`,
/// represented on classes `t mod p^{v(t) + L}` over the window
/// `c + min(k_i - max(m, w_i, 1)) <= v(t) <= c + max k_i + 2`.
pub fn transfer_sym_square(data: &SymSqTestData, kernel: &SymSqKernel, psi: &AdditiveCharacter) -> Result<XTestData> {
    let params = data.params;
    let eta = &kernel.eta;
    let terms: Vec<_> = data.terms.iter().filter(|t| t.2.norm() > 0.0).collect();
    if terms.is_empty() {
        return Ok(XTestData::compact(SchwartzFunction::zero(params)));
    }
    let m = eta.level();
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    let mut depth = m.max(1);
    let mut pieces = Vec::with_capacity(terms.len());
    for (br, bs, c) in terms {
        if br.contains_zero() {
            return Err(Error::NonIntegrable);
        }
        if bs.contains_zero() {
            return Err(Error::UnsupportedGerm);
        }
        let k = bs.valuation().unwrap();
        let w = bs.unit_class().unwrap().1;
        lo = lo.min(psi.conductor() + k - m.max(w).max(1) as i64);
        hi = hi.max(psi.conductor() + k + 2);
        depth = depth.max(w);
        pieces.push((bs.inverse()?, c * mult_mass(br, eta)));
    }
    let lambda = kernel.lambda(psi)?;
    let p = params.p();
    let modulus = pow_u128(p, depth);
    let one = PAdicNumber::one(params);
    let mut out = Vec::new();
    for n in lo..=hi {
        for nu in (1..modulus).filter(|u| u % p as u128 != 0) {
            let t = PAdicNumber::from_parts(params, n, nu as u64, depth)?;
            let mut acc = Complex64::new(0.0, 0.0);
            for (inv, weight) in &pieces {
                let ball = Ball::new(t.mul(inv.center())?, n + inv.radius())?;
                acc += weight * ball_phase_integral(&ball, Phase::Linear(one), eta, psi, DEFAULT_BUDGET)?.value;
            }
            out.push((Ball::new(t, n + depth as i64)?, lambda * eta.eval(&t)? * acc));
        }
    }
    let f = SchwartzFunction::new(params, out)?.try_normalize()?;
    Ok(XTestData { f, window: Some((lo, hi)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::real;

    #[test]
    fn unramified_lambda_closed_form() {
        for p in [2u64, 3, 5] {
            let f = FieldParams::new(p, 10).unwrap();
            let eta = MultiplicativeCharacter::unramified_quadratic(f);
            let l = default_lambda(&eta, &AdditiveCharacter::standard(f)).unwrap();
            let q = p as f64;
            assert!((l - real(2.0 * q / (q + 1.0))).norm() < 1e-14);
        }
    }
}
