use num_complex::Complex64;

use super::{ball_shape, check_kuznetsov, real, relative_residual, TransferKernelG, IMAGE_TOL};
use crate::error::{Error, Result};
use crate::local_field::{pow_u128, AdditiveCharacter, MultiplicativeCharacter};
use crate::schwartz::{
    inverse_fourier_transform, oscillatory_integral, Ball, SchwartzFunction, DEFAULT_BUDGET,
};

/// `f(t0) = int Phi(t1) psi(t0/t1) abs(t1)^{(d-3)/2} dt1`.
///
/// `f` is constant on cosets of `p^{c + kmax}` and vanishes below
/// `v(t0) = c + min(k - max(w, 1))`, where the balls of `Phi` have valuation
/// `k` and relative depth `w`.
pub fn transfer_g(phi: &SchwartzFunction, kernel: &TransferKernelG, psi: &AdditiveCharacter) -> Result<SchwartzFunction> {
    let params = phi.params();
    let phi = check_kuznetsov(phi)?;
    if phi.terms().is_empty() {
        return Ok(SchwartzFunction::zero(params));
    }
    let shape = ball_shape(&phi);
    let c = psi.conductor();
    let kmax = shape.iter().map(|s| s.0).max().unwrap();
    let lo = c + shape.iter().map(|&(k, w)| k - w.max(1) as i64).min().unwrap();
    let level = c + kmax;
    let count = pow_u128(params.p(), (level - lo) as u32);
    if count > DEFAULT_BUDGET {
        return Err(Error::RefinementOverflow { needed: count, budget: DEFAULT_BUDGET });
    }
    let weight = MultiplicativeCharacter::abs_power(params, real(kernel.weight_exponent()));
    let mut terms = Vec::with_capacity(count as usize);
    for cell in Ball::around_zero(params, lo).subdivide((level - lo) as u32)? {
        let value = oscillatory_integral(&phi, cell.center(), &weight, psi)?.value;
        terms.push((cell, value));
    }
    SchwartzFunction::new(params, terms)?.try_normalize()
}

/// Inverse of [`transfer_g`] through Fourier inversion, the inversion
/// pullback and division by the weight; certified by a round trip.
pub fn inverse_transfer_g(f: &SchwartzFunction, kernel: &TransferKernelG, psi: &AdditiveCharacter) -> Result<SchwartzFunction> {
    let params = f.params();
    let f = f.try_normalize()?;
    if f.terms().is_empty() {
        return Ok(SchwartzFunction::zero(params));
    }
    let weighted = inverse_fourier_transform(&f, psi)?
        .pullback_inverse()
        .map_err(|_| Error::NotInImage { residual: f64::INFINITY })?;
    let q = params.q() as f64;
    let e = kernel.weight_exponent();
    let terms = weighted
        .terms()
        .iter()
        .map(|(b, c)| (*b, c * Complex64::new(q.powf(e * b.valuation().unwrap() as f64), 0.0)))
        .collect();
    let phi = SchwartzFunction::new(params, terms)?.try_normalize()?;
    let residual = relative_residual(&transfer_g(&phi, kernel, psi)?, &f);
    if residual > IMAGE_TOL {
        return Err(Error::NotInImage { residual });
    }
    Ok(phi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_field::FieldParams;

    #[test]
    fn units_transfer_to_ramanujan_profile() {
        let f = FieldParams::new(5, 10).unwrap();
        let psi = AdditiveCharacter::standard(f);
        let out = transfer_g(&SchwartzFunction::shell(f, 0), &TransferKernelG::new(3).unwrap(), &psi).unwrap();
        let q = 5.0;
        let want = SchwartzFunction::indicator(Ball::around_zero(f, 0))
            .scale(real(1.0 - 1.0 / q))
            .sub(&SchwartzFunction::shell(f, -1).scale(real(1.0 / q)));
        assert!(out.structural_distance(&want).unwrap() < 1e-14);
    }

    #[test]
    fn zero_maps_to_zero() {
        let f = FieldParams::new(3, 10).unwrap();
        let psi = AdditiveCharacter::standard(f);
        let k = TransferKernelG::new(5).unwrap();
        assert!(transfer_g(&SchwartzFunction::zero(f), &k, &psi).unwrap().terms().is_empty());
        assert!(inverse_transfer_g(&SchwartzFunction::zero(f), &k, &psi).unwrap().terms().is_empty());
    }

    #[test]
    fn even_dimension_rejected() {
        assert!(TransferKernelG::new(4).is_err());
        assert!(TransferKernelG::new(1).is_err());
    }
}
