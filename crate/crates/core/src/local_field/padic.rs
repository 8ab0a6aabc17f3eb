//! Finite-precision elements of Q_p.
//!
//! A nonzero number is stored as `unit * p^valuation` where the unit is known
//! modulo `p^precision`. Zero is exact.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Largest power of `p` that stays below 2^62, so products fit in `u128`.
pub fn max_digits(p: u64) -> u32 {
    let mut n = 0;
    let mut acc: u128 = 1;
    while acc * (p as u128) <= 1u128 << 62 {
        acc *= p as u128;
        n += 1;
    }
    n
}

pub(crate) fn pow_u128(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Inverse of `a` modulo `m` by the extended Euclidean algorithm.
pub(crate) fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u128)
}

/// The prime and the number of unit digits carried by default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u64,
    precision: u32,
}

impl FieldParams {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        if precision == 0 || precision > max_digits(p) {
            return Err(Error::InvalidParameter(format!(
                "precision {precision} outside 1..={} for p = {p}",
                max_digits(p)
            )));
        }
        Ok(FieldParams { p, precision })
    }

    /// Uses the largest precision that fits the machine representation.
    pub fn with_max_precision(p: u64) -> Result<Self> {
        Self::new(p, max_digits(p))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Residue field cardinality. Only unramified Q_p is modelled, so q = p.
    pub fn q(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub(crate) fn modulus(&self, digits: u32) -> u128 {
        pow_u128(self.p, digits)
    }
}

/// An element of Q_p known to `precision` unit digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PAdicNumber {
    params: FieldParams,
    valuation: Option<i64>,
    unit: u64,
    precision: u32,
}

impl PAdicNumber {
    pub fn zero(params: FieldParams) -> Self {
        PAdicNumber { params, valuation: None, unit: 0, precision: params.precision }
    }

    pub fn one(params: FieldParams) -> Self {
        Self::from_int(params, 1)
    }

    /// `p^k` exactly.
    pub fn p_power(params: FieldParams, k: i64) -> Self {
        PAdicNumber { params, valuation: Some(k), unit: 1, precision: params.precision }
    }

    pub fn from_int(params: FieldParams, n: i64) -> Self {
        if n == 0 {
            return Self::zero(params);
        }
        let p = params.p as i128;
        let mut w = n as i128;
        let mut v = 0;
        while w % p == 0 {
            w /= p;
            v += 1;
        }
        Self::from_scaled_signed(params, v, w, params.precision)
    }

    /// `num / den` with both integers nonzero-denominator.
    pub fn from_rational(params: FieldParams, num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = Self::from_int(params, num);
        let d = Self::from_int(params, den);
        n.mul(&d.inv()?)
    }

    /// Builds `unit * p^valuation`; `unit` must be prime to p.
    pub fn from_parts(params: FieldParams, valuation: i64, unit: u64, precision: u32) -> Result<Self> {
        if precision == 0 || precision > max_digits(params.p) {
            return Err(Error::InvalidParameter(format!("precision {precision}")));
        }
        if unit.is_multiple_of(params.p) {
            return Err(Error::InvalidParameter(format!("unit {unit} divisible by {}", params.p)));
        }
        let m = params.modulus(precision);
        Ok(PAdicNumber { params, valuation: Some(valuation), unit: (unit as u128 % m) as u64, precision })
    }

    /// The number `value * p^lo`, keeping `width` digits starting at `lo`.
    /// Factors of p in `value` raise the valuation and shorten the precision.
    pub fn from_scaled(params: FieldParams, lo: i64, value: u128, width: u32) -> Self {
        let m = params.modulus(width);
        let mut w = value % m;
        if w == 0 {
            return Self::zero(params);
        }
        let p = params.p as u128;
        let mut v = lo;
        let mut prec = width;
        while w.is_multiple_of(p) {
            w /= p;
            v += 1;
            prec -= 1;
        }
        PAdicNumber { params, valuation: Some(v), unit: w as u64, precision: prec }
    }

    fn from_scaled_signed(params: FieldParams, lo: i64, value: i128, width: u32) -> Self {
        let m = params.modulus(width) as i128;
        Self::from_scaled(params, lo, value.rem_euclid(m) as u128, width)
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn is_zero(&self) -> bool {
        self.valuation.is_none()
    }

    /// `None` encodes the valuation +infinity of exact zero.
    pub fn valuation(&self) -> Option<i64> {
        self.valuation
    }

    pub fn unit(&self) -> u64 {
        self.unit
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// Level up to which the number is known: `valuation + precision`.
    pub fn absolute_precision(&self) -> Option<i64> {
        self.valuation.map(|v| v + self.precision as i64)
    }

    /// `|x| = q^{-v(x)}`.
    pub fn abs(&self) -> f64 {
        match self.valuation {
            None => 0.0,
            Some(v) => (self.params.q() as f64).powi(-(v as i32)),
        }
    }

    /// The digits of `x` at positions `lo..lo+width` read as one integer,
    /// i.e. `x / p^lo mod p^width`. Requires `v(x) >= lo` and enough precision.
    pub fn scaled_digits(&self, lo: i64, width: u32) -> Result<u128> {
        let Some(v) = self.valuation else { return Ok(0) };
        if v < lo {
            return Err(Error::InvalidParameter(format!("valuation {v} below digit window {lo}")));
        }
        let top = lo + width as i64;
        if v >= top {
            return Ok(0);
        }
        let have = v + self.precision as i64;
        if have < top {
            return Err(Error::InsufficientPrecision { needed: top - v, available: self.precision as i64 });
        }
        let m = self.params.modulus(width);
        Ok((self.unit as u128 * pow_u128(self.params.p, (v - lo) as u32)) % m)
    }

    pub fn neg(&self) -> Self {
        match self.valuation {
            None => *self,
            Some(_) => {
                let m = self.params.modulus(self.precision);
                PAdicNumber { unit: (m - self.unit as u128) as u64, ..*self }
            }
        }
    }

    /// Sum, known modulo the coarser of the two absolute precisions.
    /// Complete cancellation at the carried digits yields exact zero; partial
    /// cancellation lowers the reported precision.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        let (a, b) = match (self.valuation, other.valuation) {
            (None, _) => return Ok(*other),
            (_, None) => return Ok(*self),
            (Some(va), Some(vb)) => {
                if va <= vb {
                    (self, other)
                } else {
                    (other, self)
                }
            }
        };
        let va = a.valuation.unwrap();
        let vb = b.valuation.unwrap();
        let top = (va + a.precision as i64).min(vb + b.precision as i64);
        let width = (top - va) as u32;
        let m = self.params.modulus(width);
        let shift = vb - va;
        let bpart = if shift >= width as i64 {
            0
        } else {
            (b.unit as u128 * pow_u128(self.params.p, shift as u32)) % m
        };
        let sum = (a.unit as u128 % m + bpart) % m;
        Ok(Self::from_scaled(self.params, va, sum, width))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same_field(other)?;
        match (self.valuation, other.valuation) {
            (Some(va), Some(vb)) => {
                let prec = self.precision.min(other.precision);
                let m = self.params.modulus(prec);
                let u = (self.unit as u128 % m) * (other.unit as u128 % m) % m;
                Ok(PAdicNumber { params: self.params, valuation: Some(va + vb), unit: u as u64, precision: prec })
            }
            _ => Ok(Self::zero(self.params)),
        }
    }

    pub fn inv(&self) -> Result<Self> {
        let v = self.valuation.ok_or(Error::DivisionByZero)?;
        let m = self.params.modulus(self.precision);
        let u = inv_mod(self.unit as u128, m).ok_or(Error::DivisionByZero)?;
        Ok(PAdicNumber { params: self.params, valuation: Some(-v), unit: u as u64, precision: self.precision })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.mul(&other.inv()?)
    }

    /// Multiplication by `p^k`.
    pub fn shift(&self, k: i64) -> Self {
        match self.valuation {
            None => *self,
            Some(v) => PAdicNumber { valuation: Some(v + k), ..*self },
        }
    }

    /// Canonical representative of the class `x + p^r Z_p`: the digits of `x`
    /// below level `r`, or exact zero when `v(x) >= r`.
    pub fn truncate_below(&self, r: i64) -> Result<Self> {
        let Some(v) = self.valuation else { return Ok(*self) };
        if v >= r {
            return Ok(Self::zero(self.params));
        }
        let width = (r - v) as u64;
        if width > max_digits(self.params.p) as u64 {
            return Err(Error::PrecisionLoss);
        }
        if (self.precision as u64) < width {
            return Err(Error::InsufficientPrecision { needed: width as i64, available: self.precision as i64 });
        }
        let width = width as u32;
        let m = self.params.modulus(width);
        Ok(PAdicNumber { params: self.params, valuation: Some(v), unit: (self.unit as u128 % m) as u64, precision: width })
    }

    /// Total order used to sort canonical representatives deterministically.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        let key = |x: &Self| (x.valuation.map_or(i64::MAX, |v| v), x.unit, x.precision);
        key(self).cmp(&key(other))
    }

    fn check_same_field(&self, other: &Self) -> Result<()> {
        if self.params.p != other.params.p {
            return Err(Error::InvalidParameter(format!("primes differ: {} vs {}", self.params.p, other.params.p)));
        }
        Ok(())
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.valuation {
            None => write!(f, "0"),
            Some(v) => write!(f, "{}*{}^{} + O({}^{})", self.unit, self.params.p, v, self.params.p, v + self.precision as i64),
        }
    }
}
