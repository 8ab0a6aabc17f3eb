//! Schwartz–Bruhat functions on Q_p as finite sums of ball indicators.

use num_complex::Complex64;

use super::ball::Ball;
use crate::error::{Error, Result};
use crate::local_field::{FieldParams, MeasureConvention, PAdicNumber};

/// Measure used by [`SchwartzFunction::integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Measure {
    Additive,
    Multiplicative(MeasureConvention),
}

/// `x -> sum c_i 1_{B_i}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SchwartzFunction {
    params: FieldParams,
    terms: Vec<(Ball, Complex64)>,
    normalized: bool,
}

/// Relative tolerance used to merge and drop coefficients during normalization.
pub const MERGE_TOL: f64 = 1e-13;

impl SchwartzFunction {
    pub fn zero(params: FieldParams) -> Self {
        SchwartzFunction { params, terms: vec![], normalized: true }
    }

    pub fn new(params: FieldParams, terms: Vec<(Ball, Complex64)>) -> Result<Self> {
        for (b, _) in &terms {
            if b.p() != params.p() {
                return Err(Error::InvalidParameter(format!("ball over Q_{} in a function over Q_{}", b.p(), params.p())));
            }
        }
        Ok(SchwartzFunction { params, terms, normalized: false })
    }

    pub fn indicator(ball: Ball) -> Self {
        SchwartzFunction { params: ball.params(), terms: vec![(ball, Complex64::new(1.0, 0.0))], normalized: true }
    }

    /// `1_{p^k Z_p^x}`.
    pub fn shell(params: FieldParams, k: i64) -> Self {
        let whole = Self::indicator(Ball::around_zero(params, k));
        let inner = Self::indicator(Ball::around_zero(params, k + 1));
        whole.sub(&inner).normalize()
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn terms(&self) -> &[(Ball, Complex64)] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_zero(&self) -> bool {
        self.normalize().terms.is_empty()
    }

    fn magnitude(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        SchwartzFunction { params: self.params, terms, normalized: false }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(b, a)| (*b, a * c)).collect();
        SchwartzFunction { params: self.params, terms, normalized: false }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Disjoint decomposition with the coarsest possible balls, sorted by
    /// radius then center.
    pub fn normalize(&self) -> Self {
        if self.normalized {
            return self.clone();
        }
        self.try_normalize().expect("ball arithmetic within carried digits")
    }

    pub fn try_normalize(&self) -> Result<Self> {
        let tol = MERGE_TOL * self.magnitude();
        let terms: Vec<(Ball, Complex64)> = self.terms.iter().filter(|(_, c)| c.norm() > 0.0).cloned().collect();
        if terms.is_empty() {
            return Ok(Self::zero(self.params));
        }
        let root_r = terms.iter().map(|(b, _)| b.valuation().map_or(b.radius(), |v| v.min(b.radius()))).min().unwrap();
        let root = Ball::around_zero(self.params, root_r);
        let mut leaves = Vec::new();
        split(&root, &terms, Complex64::new(0.0, 0.0), tol, &mut leaves)?;
        leaves.retain(|(_, c)| c.norm() > tol);
        leaves.sort_by_key(|a| a.0);
        Ok(SchwartzFunction { params: self.params, terms: leaves, normalized: true })
    }

    pub fn evaluate(&self, x: &PAdicNumber) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (b, c) in &self.terms {
            if b.contains_point(x)? {
                acc += c;
            }
        }
        Ok(acc)
    }

    pub fn integrate(&self, measure: Measure) -> Result<Complex64> {
        match measure {
            Measure::Additive => Ok(self.terms.iter().map(|(b, c)| c * b.volume()).sum()),
            Measure::Multiplicative(conv) => {
                let q = self.params.q() as f64;
                let mut acc = Complex64::new(0.0, 0.0);
                for (b, c) in &self.normalize().terms {
                    let v = b.valuation().ok_or(Error::NonIntegrable)?;
                    let vol = q.powi((v - b.radius()) as i32) * conv.unit_group_volume(self.params.q()) / (1.0 - 1.0 / q);
                    acc += c * vol;
                }
                Ok(acc)
            }
        }
    }

    /// `x -> Phi(-x)`.
    pub fn reflect(&self) -> Self {
        let terms = self.terms.iter().map(|(b, c)| (b.neg(), *c)).collect();
        SchwartzFunction { params: self.params, terms, normalized: false }.normalize()
    }

    /// `x -> Phi(x / a)`.
    pub fn translate_mult(&self, a: &PAdicNumber) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (b, c) in &self.terms {
            terms.push((b.scale(a)?, *c));
        }
        SchwartzFunction { params: self.params, terms, normalized: false }.try_normalize()
    }

    /// `x -> Phi(1/x) |x|^{-2}`, the pullback of `Phi dx` under inversion.
    pub fn pullback_inverse(&self) -> Result<Self> {
        let q = self.params.q() as f64;
        let mut terms = Vec::with_capacity(self.terms.len());
        for (b, c) in &self.normalize().terms {
            let k = b.valuation().ok_or(Error::SupportAtZero)?;
            terms.push((b.inverse()?, c * q.powi(-2 * k as i32)));
        }
        SchwartzFunction { params: self.params, terms, normalized: false }.try_normalize()
    }

    /// Largest absolute difference of coefficients after normalizing both,
    /// or `None` when the ball decompositions differ.
    pub fn structural_distance(&self, other: &Self) -> Option<f64> {
        let a = self.normalize();
        let b = other.normalize();
        if a.terms.len() != b.terms.len() {
            return None;
        }
        let mut worst: f64 = 0.0;
        for ((ba, ca), (bb, cb)) in a.terms.iter().zip(&b.terms) {
            if ba != bb {
                return None;
            }
            worst = worst.max((ca - cb).norm());
        }
        Some(worst)
    }

    /// `sup |self - other|` over the common refinement.
    pub fn sup_distance(&self, other: &Self) -> f64 {
        self.sub(other).normalize().terms.iter().map(|(_, c)| c.norm()).fold(0.0, f64::max)
    }

    /// Smallest and largest radius among the terms.
    pub fn radius_range(&self) -> Option<(i64, i64)> {
        let rs = self.terms.iter().map(|(b, _)| b.radius());
        let lo = rs.clone().min()?;
        Some((lo, rs.max()?))
    }

    /// True when no term's ball contains 0.
    pub fn avoids_zero(&self) -> bool {
        self.normalize().terms.iter().all(|(b, _)| !b.contains_zero())
    }
}

/// Recursive refinement below `node`; `base` collects coefficients of balls
/// that contain `node`.
fn split(
    node: &Ball,
    terms: &[(Ball, Complex64)],
    base: Complex64,
    tol: f64,
    out: &mut Vec<(Ball, Complex64)>,
) -> Result<()> {
    let mut value = base;
    let mut inner: Vec<(Ball, Complex64)> = Vec::new();
    for (b, c) in terms {
        if b.radius() == node.radius() {
            value += c;
        } else {
            inner.push((*b, *c));
        }
    }
    if inner.is_empty() {
        out.push((*node, value));
        return Ok(());
    }
    let p = node.p();
    let mut buckets: Vec<Vec<(Ball, Complex64)>> = vec![Vec::new(); p as usize];
    for (b, c) in inner {
        let k = node.child_index(&b)?;
        buckets[k as usize].push((b, c));
    }
    let start = out.len();
    for (k, bucket) in buckets.iter().enumerate() {
        let child = node.child(k as u64)?;
        split(&child, bucket, value, tol, out)?;
    }
    let produced = &out[start..];
    let mergeable = produced.len() == p as usize
        && produced.iter().all(|(b, c)| b.radius() == node.radius() + 1 && (c - produced[0].1).norm() <= tol);
    if mergeable {
        let v = produced[0].1;
        out.truncate(start);
        out.push((*node, v));
    }
    Ok(())
}
