//! Fourier and Mellin transforms of ball decompositions.

use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};

use super::ball::Ball;
use super::function::SchwartzFunction;
use super::oscillatory::DEFAULT_BUDGET;
use super::rational::{ExactComplex, LaurentPoly, RationalFnT, Scalar};
use crate::error::{Error, Result};
use crate::local_field::{pow_u128, AdditiveCharacter, MeasureConvention, MultiplicativeCharacter, PAdicNumber};

/// `(F Phi)(y) = int Phi(x) psi(x y) dx`.
pub fn fourier_transform(phi: &SchwartzFunction, psi: &AdditiveCharacter) -> Result<SchwartzFunction> {
    fourier_transform_with_budget(phi, psi, DEFAULT_BUDGET)
}

pub fn fourier_transform_with_budget(
    phi: &SchwartzFunction,
    psi: &AdditiveCharacter,
    budget: u128,
) -> Result<SchwartzFunction> {
    let params = phi.params();
    let p = params.p();
    let q = params.q() as f64;
    let c = psi.conductor();
    let mut terms = Vec::new();
    for (b, coeff) in phi.normalize().terms() {
        let r = b.radius();
        let vol = coeff * q.powi(-(r as i32));
        match b.valuation() {
            None => terms.push((Ball::around_zero(params, c - r), vol)),
            Some(va) => {
                let width = (r - va) as u32;
                let count = pow_u128(p, width);
                if count > budget {
                    return Err(Error::PrecisionLoss);
                }
                let ua = b.center().unit() as u128;
                for k in 0..count {
                    let y0 = PAdicNumber::from_scaled(params, c - r, k, width);
                    let phase = psi.phase(va + c - r, (ua * k) % count);
                    terms.push((Ball::new(y0, c - va)?, vol * phase.to_complex()));
                }
            }
        }
    }
    SchwartzFunction::new(params, terms)?.try_normalize()
}

/// Inverse of [`fourier_transform`]: `q^c (F f)(-x)`.
pub fn inverse_fourier_transform(f: &SchwartzFunction, psi: &AdditiveCharacter) -> Result<SchwartzFunction> {
    let q = f.params().q() as f64;
    Ok(fourier_transform(f, psi)?.reflect().scale(Complex64::new(q.powi(psi.conductor() as i32), 0.0)).normalize())
}

/// Average of the table of `chi` over units congruent to `u` mod `p^w`.
fn class_average(chi: &MultiplicativeCharacter, u: u128, w: u32) -> Complex64 {
    let m = chi.level();
    if m <= w {
        return chi.unit_value(u);
    }
    let p = chi.params().p();
    let step = pow_u128(p, w);
    let n = pow_u128(p, m - w);
    let base = u % step;
    let s: Complex64 = (0..n).map(|i| chi.unit_value(base + step * i)).sum();
    s / n as f64
}

fn mellin_generic<T: Scalar>(
    phi: &SchwartzFunction,
    chi: &MultiplicativeCharacter,
    conv: MeasureConvention,
    lift: impl Fn(Complex64) -> Result<T>,
    volume: impl Fn(u64, u32) -> T,
) -> Result<RationalFnT<T>> {
    let q = phi.params().q();
    let mut poly = LaurentPoly::zero();
    let mut tails = LaurentPoly::zero();
    let e = lift(chi.power_value(1))?;
    let tau = chi.unit_average();
    let unit_vol = lift(Complex64::new(conv.unit_group_volume(q), 0.0))?;
    for (b, coeff) in phi.normalize().terms() {
        match b.unit_class() {
            Some((u, w)) => {
                let k = b.valuation().unwrap();
                let val = lift(coeff * class_average(chi, u, w) * chi.power_value(k))? * volume(q, w) * unit_vol.clone();
                poly = poly.add(&LaurentPoly::monomial(val, k));
            }
            None => {
                let r = b.radius();
                let val = lift(coeff * tau * chi.power_value(r))? * unit_vol.clone();
                tails = tails.add(&LaurentPoly::monomial(val, r));
            }
        }
    }
    if tails.is_zero() {
        return Ok(RationalFnT::from_poly(poly));
    }
    let den = LaurentPoly::from_coeffs(0, vec![T::one(), -e]);
    RationalFnT::new(poly.mul(&den).add(&tails), den)
}

/// `int Phi(x) chi(x) |x|^s d^x x` as a rational function of `t = q^{-s}`.
pub fn mellin_transform(phi: &SchwartzFunction, chi: &MultiplicativeCharacter) -> Result<RationalFnT<Complex64>> {
    mellin_transform_with(phi, chi, MeasureConvention::UnitVolume)
}

pub fn mellin_transform_with(
    phi: &SchwartzFunction,
    chi: &MultiplicativeCharacter,
    conv: MeasureConvention,
) -> Result<RationalFnT<Complex64>> {
    mellin_generic(phi, chi, conv, Ok, |q, w| Complex64::new((q as f64).powi(1 - w as i32) / (q as f64 - 1.0), 0.0))
}

/// Exact Gaussian-rational Mellin transform. Requires coefficients and
/// character values that are exactly representable rationals.
pub fn mellin_transform_exact(phi: &SchwartzFunction, chi: &MultiplicativeCharacter) -> Result<RationalFnT<ExactComplex>> {
    mellin_generic(phi, chi, MeasureConvention::UnitVolume, exact_lift, |q, w| {
        let q = q as i64;
        if w == 0 {
            ExactComplex::new(Ratio::new(q, q - 1), Ratio::zero())
        } else {
            ExactComplex::new(Ratio::new(1, q.pow(w - 1) * (q - 1)), Ratio::zero())
        }
    })
}

fn exact_part(x: f64) -> Result<Ratio<i64>> {
    if x == 0.0 {
        return Ok(Ratio::zero());
    }
    let r = Ratio::<i64>::approximate_float(x).ok_or_else(|| Error::InvalidParameter(format!("{x} is not rational")))?;
    if *r.numer() as f64 / *r.denom() as f64 != x {
        return Err(Error::InvalidParameter(format!("{x} has no exact small rational form")));
    }
    Ok(r)
}

fn exact_lift(z: Complex64) -> Result<ExactComplex> {
    Ok(ExactComplex::new(exact_part(z.re)?, exact_part(z.im)?))
}

/// `1/(1 - e t)` exactly, the Tate zeta of the basic function.
pub fn geometric(e: i64) -> RationalFnT<ExactComplex> {
    let one = ExactComplex::one();
    let den = LaurentPoly::from_coeffs(0, vec![one, -ExactComplex::new(Ratio::from_integer(e), Ratio::zero())]);
    RationalFnT::new(LaurentPoly::constant(one), den).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldParams;

    fn f(p: u64) -> FieldParams {
        FieldParams::new(p, 10).unwrap()
    }

    #[test]
    fn basic_function_is_self_dual() {
        let phi = SchwartzFunction::indicator(Ball::around_zero(f(5), 0));
        let g = fourier_transform(&phi, &AdditiveCharacter::standard(f(5))).unwrap();
        assert_eq!(g.structural_distance(&phi), Some(0.0));
    }

    #[test]
    fn scaling_of_sublattice() {
        let phi = SchwartzFunction::indicator(Ball::around_zero(f(3), 1));
        let g = fourier_transform(&phi, &AdditiveCharacter::standard(f(3))).unwrap();
        let want = SchwartzFunction::indicator(Ball::around_zero(f(3), -1)).scale(Complex64::new(1.0 / 3.0, 0.0));
        assert!(g.structural_distance(&want).unwrap() < 1e-15);
    }

    #[test]
    fn tate_zeta_exact() {
        for p in [2, 3, 5, 7] {
            let phi = SchwartzFunction::indicator(Ball::around_zero(f(p), 0));
            let z = mellin_transform_exact(&phi, &MultiplicativeCharacter::trivial(f(p))).unwrap();
            assert_eq!(z, geometric(1));
        }
    }

    #[test]
    fn mellin_of_units_is_one() {
        let z = mellin_transform_exact(&SchwartzFunction::shell(f(5), 0), &MultiplicativeCharacter::trivial(f(5))).unwrap();
        assert!(z.equals(&RationalFnT::from_poly(LaurentPoly::constant(ExactComplex::one()))));
    }

    #[test]
    fn mellin_with_unramified_sign() {
        let phi = SchwartzFunction::indicator(Ball::around_zero(f(3), 0));
        let z = mellin_transform_exact(&phi, &MultiplicativeCharacter::unramified_quadratic(f(3))).unwrap();
        assert_eq!(z, geometric(-1));
    }
}
