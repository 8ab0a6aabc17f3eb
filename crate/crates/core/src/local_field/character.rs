//! Additive and multiplicative characters of Q_p and the Haar-measure convention.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::padic::{pow_u128, FieldParams, PAdicNumber};
use crate::error::{Error, Result};

/// The root of unity `exp(2 pi i * index / p^level)`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootOfUnity {
    pub p: u64,
    pub index: u64,
    pub level: u32,
}

impl RootOfUnity {
    pub fn one(p: u64) -> Self {
        RootOfUnity { p, index: 0, level: 0 }
    }

    pub fn new(p: u64, index: u128, level: u32) -> Self {
        let m = pow_u128(p, level);
        let mut index = index % m;
        let mut level = level;
        while level > 0 && index.is_multiple_of(p as u128) {
            index /= p as u128;
            level -= 1;
        }
        if index == 0 {
            level = 0;
        }
        RootOfUnity { p, index: index as u64, level }
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.p, other.p);
        let level = self.level.max(other.level);
        let a = self.index as u128 * pow_u128(self.p, level - self.level);
        let b = other.index as u128 * pow_u128(self.p, level - other.level);
        Self::new(self.p, a + b, level)
    }

    pub fn conj(&self) -> Self {
        let m = pow_u128(self.p, self.level);
        Self::new(self.p, m - self.index as u128, self.level)
    }

    pub fn is_one(&self) -> bool {
        self.index == 0
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.index == 0 {
            return Complex64::new(1.0, 0.0);
        }
        let theta = 2.0 * PI * self.index as f64 / pow_u128(self.p, self.level) as f64;
        Complex64::from_polar(1.0, theta)
    }
}

/// The standard character `x -> exp(2 pi i {x / p^c})`, trivial exactly on `p^c Z_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdditiveCharacter {
    params: FieldParams,
    conductor: i64,
}

impl AdditiveCharacter {
    pub fn standard(params: FieldParams) -> Self {
        AdditiveCharacter { params, conductor: 0 }
    }

    pub fn with_conductor(params: FieldParams, conductor: i64) -> Self {
        AdditiveCharacter { params, conductor }
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn conductor(&self) -> i64 {
        self.conductor
    }

    /// Exact root-of-unity index of `psi(x)`.
    pub fn eval(&self, x: &PAdicNumber) -> Result<RootOfUnity> {
        let p = self.params.p();
        let Some(v) = x.valuation() else { return Ok(RootOfUnity::one(p)) };
        if v >= self.conductor {
            return Ok(RootOfUnity::one(p));
        }
        let depth = (self.conductor - v) as u32;
        if x.precision() < depth {
            return Err(Error::InsufficientPrecision { needed: depth as i64, available: x.precision() as i64 });
        }
        Ok(RootOfUnity::new(p, x.unit() as u128, depth))
    }

    pub fn eval_complex(&self, x: &PAdicNumber) -> Result<Complex64> {
        Ok(self.eval(x)?.to_complex())
    }

    /// `psi(p^v * u)` for an integer unit residue `u` known modulo at least
    /// `p^(conductor - v)`.
    pub(crate) fn phase(&self, v: i64, u: u128) -> RootOfUnity {
        let p = self.params.p();
        if v >= self.conductor {
            return RootOfUnity::one(p);
        }
        RootOfUnity::new(p, u, (self.conductor - v) as u32)
    }
}

/// `x -> |x|^s * eps^{v(x)} * table(u mod p^m)` for `x = p^v u`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicativeCharacter {
    params: FieldParams,
    exponent: Complex64,
    uniformizer_value: Complex64,
    level: u32,
    table: Vec<Complex64>,
}

impl MultiplicativeCharacter {
    pub fn trivial(params: FieldParams) -> Self {
        Self::abs_power(params, Complex64::new(0.0, 0.0))
    }

    /// `|x|^s`.
    pub fn abs_power(params: FieldParams, s: Complex64) -> Self {
        MultiplicativeCharacter {
            params,
            exponent: s,
            uniformizer_value: Complex64::new(1.0, 0.0),
            level: 0,
            table: vec![Complex64::new(1.0, 0.0)],
        }
    }

    /// The quadratic character trivial on units and `-1` on the uniformizer.
    pub fn unramified_quadratic(params: FieldParams) -> Self {
        MultiplicativeCharacter { uniformizer_value: Complex64::new(-1.0, 0.0), ..Self::trivial(params) }
    }

    /// A ramified quadratic character trivial on `p`: the Legendre symbol on
    /// units for odd p, and `u -> (-1)^((u-1)/2)` for p = 2.
    pub fn ramified_quadratic(params: FieldParams) -> Self {
        let p = params.p();
        let (level, modulus) = if p == 2 { (2, 4u64) } else { (1, p) };
        let mut table = vec![Complex64::new(0.0, 0.0); modulus as usize];
        if p == 2 {
            table[1] = Complex64::new(1.0, 0.0);
            table[3] = Complex64::new(-1.0, 0.0);
        } else {
            for u in 1..p {
                table[((u * u) % p) as usize] = Complex64::new(1.0, 0.0);
            }
            for u in 1..p {
                if table[u as usize] == Complex64::new(0.0, 0.0) {
                    table[u as usize] = Complex64::new(-1.0, 0.0);
                }
            }
        }
        MultiplicativeCharacter { params, exponent: Complex64::new(0.0, 0.0), uniformizer_value: Complex64::new(1.0, 0.0), level, table }
    }

    /// A character from explicit data. `table` has `p^level` entries indexed
    /// by residue; entries at non-units are ignored.
    pub fn from_table(
        params: FieldParams,
        exponent: Complex64,
        uniformizer_value: Complex64,
        level: u32,
        table: Vec<Complex64>,
    ) -> Result<Self> {
        if table.len() as u128 != pow_u128(params.p(), level) {
            return Err(Error::InvalidParameter(format!("table needs {} entries", pow_u128(params.p(), level))));
        }
        Ok(MultiplicativeCharacter { params, exponent, uniformizer_value, level, table })
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn exponent(&self) -> Complex64 {
        self.exponent
    }

    pub fn uniformizer_value(&self) -> Complex64 {
        self.uniformizer_value
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    /// Value on a unit with residue `u` modulo `p^level` (or finer).
    pub fn unit_value(&self, u: u128) -> Complex64 {
        let m = pow_u128(self.params.p(), self.level);
        self.table[(u % m) as usize]
    }

    /// `chi(p^v)`.
    pub fn power_value(&self, v: i64) -> Complex64 {
        let q = self.params.q() as f64;
        let abs_part = Complex64::new(q, 0.0).powc(-self.exponent * v as f64);
        abs_part * self.uniformizer_value.powi(v as i32)
    }

    /// Average of the table over the unit group: 1 for characters trivial on
    /// units, 0 for nontrivial ones.
    pub fn unit_average(&self) -> Complex64 {
        let p = self.params.p() as u128;
        let m = pow_u128(self.params.p(), self.level);
        let mut sum = Complex64::new(0.0, 0.0);
        let mut count = 0u128;
        for u in 0..m {
            if u % p != 0 || m == 1 {
                sum += self.table[u as usize];
                count += 1;
            }
        }
        sum / count as f64
    }

    /// True when all values on units are `+-1` and `eps = +-1`, `s = 0`.
    pub fn is_real_sign(&self) -> bool {
        let sign = |z: Complex64| z.im == 0.0 && (z.re == 1.0 || z.re == -1.0);
        let p = self.params.p() as u128;
        self.exponent == Complex64::new(0.0, 0.0)
            && sign(self.uniformizer_value)
            && self.table.iter().enumerate().all(|(u, z)| ((u as u128).is_multiple_of(p) && self.level > 0) || sign(*z))
    }

    pub fn eval(&self, x: &PAdicNumber) -> Result<Complex64> {
        let v = x.valuation().ok_or(Error::ZeroArgument)?;
        if x.precision() < self.level {
            return Err(Error::InsufficientPrecision { needed: self.level as i64, available: x.precision() as i64 });
        }
        Ok(self.power_value(v) * self.unit_value(x.unit() as u128))
    }
}

/// Normalization of the multiplicative Haar measure; the additive one always
/// gives `Z_p` volume 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum MeasureConvention {
    /// `vol(Z_p^x, d^x x) = 1`.
    #[default]
    UnitVolume,
    /// `d^x x = dx / |x|`, so `vol(Z_p^x) = 1 - 1/q`.
    DxOverAbsX,
}

impl MeasureConvention {
    pub fn unit_group_volume(&self, q: u64) -> f64 {
        match self {
            MeasureConvention::UnitVolume => 1.0,
            MeasureConvention::DxOverAbsX => 1.0 - 1.0 / q as f64,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> FieldParams {
        FieldParams::new(p, 8).unwrap()
    }

    #[test]
    fn psi_trivial_on_integers() {
        let psi = AdditiveCharacter::standard(f(5));
        assert!(psi.eval(&PAdicNumber::from_int(f(5), 17)).unwrap().is_one());
    }

    #[test]
    fn psi_of_one_over_p() {
        let psi = AdditiveCharacter::standard(f(5));
        let x = PAdicNumber::from_rational(f(5), 1, 5).unwrap();
        let z = psi.eval(&x).unwrap();
        assert_eq!(z, RootOfUnity::new(5, 1, 1));
        assert!((z.to_complex() - Complex64::from_polar(1.0, 2.0 * PI / 5.0)).norm() < 1e-15);
    }

    #[test]
    fn psi_rational_fractional_part() {
        // (1+p)/p^2 = 6/25 has fractional part 6/25
        let psi = AdditiveCharacter::standard(f(5));
        let x = PAdicNumber::from_rational(f(5), 6, 25).unwrap();
        assert_eq!(psi.eval(&x).unwrap(), RootOfUnity::new(5, 6, 2));
    }

    #[test]
    fn psi_needs_precision() {
        let params = FieldParams::new(5, 2).unwrap();
        let psi = AdditiveCharacter::standard(params);
        let x = PAdicNumber::from_parts(params, -3, 1, 2).unwrap();
        assert!(matches!(psi.eval(&x), Err(Error::InsufficientPrecision { .. })));
    }

    #[test]
    fn abs_power_on_uniformizer() {
        let s = Complex64::new(0.3, 1.1);
        let chi = MultiplicativeCharacter::abs_power(f(5), s);
        let got = chi.eval(&PAdicNumber::p_power(f(5), 1)).unwrap();
        let want = Complex64::new(5.0, 0.0).powc(-s);
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn unramified_quadratic_even_valuation() {
        let eta = MultiplicativeCharacter::unramified_quadratic(f(5));
        let x = PAdicNumber::from_int(f(5), 25 * 3);
        assert_eq!(eta.eval(&x).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn ramified_quadratic_of_two_mod_five() {
        // squares mod 5 are {1, 4}
        let eta = MultiplicativeCharacter::ramified_quadratic(f(5));
        assert_eq!(eta.eval(&PAdicNumber::from_int(f(5), 2)).unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(eta.eval(&PAdicNumber::from_int(f(5), 4)).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn zero_argument() {
        let chi = MultiplicativeCharacter::trivial(f(3));
        assert_eq!(chi.eval(&PAdicNumber::zero(f(3))), Err(Error::ZeroArgument));
    }

    #[test]
    fn root_of_unity_lowest_terms() {
        assert_eq!(RootOfUnity::new(5, 10, 2), RootOfUnity::new(5, 2, 1));
        let a = RootOfUnity::new(3, 1, 2);
        assert!(a.mul(&a.conj()).is_one());
    }

    #[test]
    fn unit_volume_conventions() {
        assert_eq!(MeasureConvention::default().unit_group_volume(5), 1.0);
        assert!((MeasureConvention::DxOverAbsX.unit_group_volume(5) - 0.8).abs() < 1e-15);
    }
}
