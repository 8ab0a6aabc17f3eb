//! Balls `a + p^r Z_p` and multiplicative cells.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::local_field::{max_digits, pow_u128, FieldParams, PAdicNumber};

/// Digits of `x` at positions `lo..hi` as one integer. Requires `v(x) >= lo`.
pub(crate) fn window(x: &PAdicNumber, lo: i64, hi: i64) -> Result<u128> {
    if hi <= lo {
        return Ok(0);
    }
    let width = hi - lo;
    if width > max_digits(x.p()) as i64 {
        return Err(Error::PrecisionLoss);
    }
    x.scaled_digits(lo, width as u32)
}

/// The p-adic digit of `x` at position `r`.
pub(crate) fn digit_at(x: &PAdicNumber, r: i64) -> Result<u64> {
    match x.valuation() {
        None => Ok(0),
        Some(v) if v > r => Ok(0),
        Some(v) => Ok((window(x, v, r + 1)? / pow_u128(x.p(), (r - v) as u32)) as u64),
    }
}

/// How two balls sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallRelation {
    Equal,
    Contains,
    ContainedIn,
    Disjoint,
}

/// The set `center + p^radius Z_p`, with the center reduced to its digits
/// below `radius`.
#[derive(Debug, Clone, Copy)]
pub struct Ball {
    center: PAdicNumber,
    radius: i64,
}

impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ball {}

impl PartialOrd for Ball {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ball {
    fn cmp(&self, other: &Self) -> Ordering {
        self.radius.cmp(&other.radius).then_with(|| self.center.canonical_cmp(&other.center))
    }
}

impl Ball {
    pub fn new(center: PAdicNumber, radius: i64) -> Result<Self> {
        Ok(Ball { center: center.truncate_below(radius)?, radius })
    }

    /// `p^r Z_p`.
    pub fn around_zero(params: FieldParams, radius: i64) -> Self {
        Ball { center: PAdicNumber::zero(params), radius }
    }

    pub fn center(&self) -> &PAdicNumber {
        &self.center
    }

    pub fn radius(&self) -> i64 {
        self.radius
    }

    pub fn params(&self) -> FieldParams {
        self.center.params()
    }

    pub fn p(&self) -> u64 {
        self.center.p()
    }

    /// Additive Haar volume `q^{-r}`.
    pub fn volume(&self) -> f64 {
        (self.p() as f64).powi(-(self.radius as i32))
    }

    pub fn contains_zero(&self) -> bool {
        self.center.is_zero()
    }

    /// Valuation shared by every point of the ball, when 0 is not in it.
    pub fn valuation(&self) -> Option<i64> {
        self.center.valuation()
    }

    /// Unit digits of the center, known modulo `p^(r - v)`.
    pub fn unit_class(&self) -> Option<(u128, u32)> {
        self.center.valuation().map(|v| (self.center.unit() as u128, (self.radius - v) as u32))
    }

    pub fn contains_point(&self, x: &PAdicNumber) -> Result<bool> {
        match x.valuation() {
            None => Ok(self.center.is_zero()),
            Some(v) if v >= self.radius => Ok(self.center.is_zero()),
            Some(v) if self.center.valuation().is_some_and(|k| k != v) => Ok(false),
            Some(_) => {
                let t = x.truncate_below(self.radius)?;
                Ok(t.canonical_cmp(&self.center) == Ordering::Equal)
            }
        }
    }

    pub fn contains_ball(&self, other: &Ball) -> Result<bool> {
        if other.radius < self.radius {
            return Ok(false);
        }
        let t = other.center.truncate_below(self.radius)?;
        Ok(t.canonical_cmp(&self.center) == Ordering::Equal)
    }

    pub fn relation(&self, other: &Ball) -> Result<BallRelation> {
        if self == other {
            return Ok(BallRelation::Equal);
        }
        if self.contains_ball(other)? {
            return Ok(BallRelation::Contains);
        }
        if other.contains_ball(self)? {
            return Ok(BallRelation::ContainedIn);
        }
        Ok(BallRelation::Disjoint)
    }

    /// Lowest digit position carried by the center (`radius` for center 0).
    fn low(&self) -> i64 {
        self.center.valuation().map_or(self.radius, |v| v.min(self.radius))
    }

    /// The sub-ball `center + k p^r + p^{r+1} Z_p`.
    pub fn child(&self, k: u64) -> Result<Ball> {
        let lo = self.low();
        let width = self.radius + 1 - lo;
        if width > max_digits(self.p()) as i64 {
            return Err(Error::PrecisionLoss);
        }
        let digits = window(&self.center, lo, self.radius)? + k as u128 * pow_u128(self.p(), (self.radius - lo) as u32);
        let center = PAdicNumber::from_scaled(self.params(), lo, digits, width as u32);
        Ok(Ball { center, radius: self.radius + 1 })
    }

    /// The `p^{depth}` sub-balls at radius `r + depth`, in digit order.
    pub fn subdivide(&self, depth: u32) -> Result<Vec<Ball>> {
        let mut out = vec![*self];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(out.len() * self.p() as usize);
            for b in &out {
                for k in 0..self.p() {
                    next.push(b.child(k)?);
                }
            }
            out = next;
        }
        Ok(out)
    }

    /// Index of the child of `self` containing `inner`.
    pub(crate) fn child_index(&self, inner: &Ball) -> Result<u64> {
        digit_at(&inner.center, self.radius)
    }

    /// The image under `x -> a x`.
    pub fn scale(&self, a: &PAdicNumber) -> Result<Ball> {
        let va = a.valuation().ok_or(Error::DivisionByZero)?;
        let r = self.radius + va;
        if self.center.is_zero() {
            return Ok(Ball::around_zero(self.params(), r));
        }
        Ball::new(self.center.mul(a)?, r)
    }

    pub fn neg(&self) -> Ball {
        Ball { center: self.center.neg(), radius: self.radius }
    }

    /// The set `{x^{-1} : x in self}`, a ball when 0 is not in `self`.
    pub fn inverse(&self) -> Result<Ball> {
        let v = self.center.valuation().ok_or(Error::SupportAtZero)?;
        Ball::new(self.center.inv()?, self.radius - 2 * v)
    }
}

/// The multiplicative cell `p^k u (1 + p^m Z_p)`, a ball of radius `k + m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub valuation: i64,
    pub unit_class: u128,
    pub mult_precision: u32,
}

impl Cell {
    pub fn to_ball(&self, params: FieldParams) -> Result<Ball> {
        let u = PAdicNumber::from_parts(params, self.valuation, self.unit_class as u64, self.mult_precision.max(1))?;
        Ball::new(u, self.valuation + self.mult_precision as i64)
    }

    /// The cells of the shell `v(x) = k` at depth `m`.
    pub fn shell(p: u64, k: i64, m: u32) -> Vec<Cell> {
        let modulus = pow_u128(p, m);
        (0..modulus)
            .filter(|u| u % p as u128 != 0)
            .map(|u| Cell { valuation: k, unit_class: u, mult_precision: m })
            .collect()
    }
}
