//! Laurent polynomials and rational functions in `t = q^{-s}`.

use std::fmt::Debug;
use std::ops::Neg;

use num_complex::{Complex, Complex64};
use num_rational::Ratio;
use num_traits::{Num, ToPrimitive, Zero};
use serde_json::{json, Value};

/// Gaussian rationals, the exact coefficient ring.
pub type ExactComplex = Complex<Ratio<i64>>;

/// Field of coefficients for [`LaurentPoly`] and [`RationalFnT`].
pub trait Scalar: Clone + Debug + PartialEq + Num + Neg<Output = Self> {
    /// Treats `self` as zero relative to `scale` (exactly zero for exact types).
    fn negligible(&self, scale: f64) -> bool;
    fn magnitude(&self) -> f64;
    fn to_c64(&self) -> Complex64;
}

impl Scalar for Complex64 {
    fn negligible(&self, scale: f64) -> bool {
        self.norm() <= 1e-12 * scale.max(1e-300)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn to_c64(&self) -> Complex64 {
        *self
    }
}

impl Scalar for ExactComplex {
    fn negligible(&self, _scale: f64) -> bool {
        self.is_zero()
    }
    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }
    fn to_c64(&self) -> Complex64 {
        let f = |r: &Ratio<i64>| r.numer().to_f64().unwrap() / r.denom().to_f64().unwrap();
        Complex64::new(f(&self.re), f(&self.im))
    }
}

/// `sum_i coeffs[i] t^{low + i}`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaurentPoly<T> {
    low: i64,
    coeffs: Vec<T>,
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: vec![] }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, k: i64) -> Self {
        LaurentPoly { low: k, coeffs: vec![c] }.trimmed(0.0)
    }

    pub fn from_coeffs(low: i64, coeffs: Vec<T>) -> Self {
        LaurentPoly { low, coeffs }.trimmed(0.0)
    }

    pub fn low(&self) -> i64 {
        self.low
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent present (`None` for the zero polynomial).
    pub fn high(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, k: i64) -> T {
        if k < self.low {
            return T::zero();
        }
        self.coeffs.get((k - self.low) as usize).cloned().unwrap_or_else(T::zero)
    }

    fn scale_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Drops leading and trailing coefficients negligible against `scale`.
    fn trimmed(mut self, scale: f64) -> Self {
        while self.coeffs.last().is_some_and(|c| c.negligible(scale)) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.negligible(scale)).count();
        self.coeffs.drain(..lead);
        self.low += lead as i64;
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let high = self.high().unwrap().max(other.high().unwrap());
        let coeffs = (low..=high).map(|k| self.coeff(k) + other.coeff(k)).collect();
        LaurentPoly { low, coeffs }.trimmed(0.0)
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![T::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        LaurentPoly { low: self.low + other.low, coeffs }.trimmed(0.0)
    }

    pub fn scale(&self, c: &T) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect() }.trimmed(0.0)
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * t + c.to_c64();
        }
        acc * t.powi(self.low as i32)
    }

    /// Long division from the top degree down; the remainder collects what
    /// is left below the divisor's degree span.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let scale = self.scale_norm().max(d.scale_norm());
        let dt = d.clone().trimmed(d.scale_norm());
        let q = self.clone().trimmed(scale).divrem(&dt.shift(-dt.low), scale).0.shift(-dt.low);
        let r = self.sub(&q.mul(d));
        (q, r)
    }

    /// Coefficients of degree at most `k`.
    pub fn truncate_above(&self, k: i64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().filter(|(i, _)| self.low + (*i as i64) <= k).map(|(_, c)| c.clone()).collect();
        LaurentPoly { low: self.low, coeffs }.trimmed(0.0)
    }

    /// Largest coefficient magnitude.
    pub fn max_norm(&self) -> f64 {
        self.scale_norm()
    }

    /// Euclidean division treating both as polynomials shifted to `low = 0`;
    /// returns `(quotient, remainder)` with the shift accounted for.
    fn divrem(&self, d: &Self, scale: f64) -> (Self, Self) {
        let dn = d.coeffs.len();
        let lead = d.coeffs.last().unwrap().clone();
        let mut r = self.coeffs.clone();
        let mut qv = vec![T::zero(); r.len().saturating_sub(dn - 1).max(1)];
        while r.len() >= dn {
            let k = r.len() - dn;
            let c = r.last().unwrap().clone() / lead.clone();
            for (i, dc) in d.coeffs.iter().enumerate() {
                r[k + i] = r[k + i].clone() - c.clone() * dc.clone();
            }
            r.pop();
            qv[k] = c;
            while r.last().is_some_and(|x| x.negligible(scale)) && r.len() >= dn {
                r.pop();
            }
        }
        let q = LaurentPoly { low: self.low - d.low, coeffs: qv }.trimmed(0.0);
        let rem = LaurentPoly { low: self.low, coeffs: r }.trimmed(scale);
        (q, rem)
    }
}

/// `num / den`. The denominator is kept as a polynomial with nonzero
/// constant term equal to 1; negative powers live in the numerator.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalFnT<T> {
    num: LaurentPoly<T>,
    den: LaurentPoly<T>,
}

impl<T: Scalar> RationalFnT<T> {
    pub fn new(num: LaurentPoly<T>, den: LaurentPoly<T>) -> crate::error::Result<Self> {
        if den.is_zero() {
            return Err(crate::error::Error::DivisionByZero);
        }
        Ok(RationalFnT { num, den }.canonical())
    }

    pub fn from_poly(num: LaurentPoly<T>) -> Self {
        RationalFnT { num, den: LaurentPoly::constant(T::one()) }
    }

    pub fn num(&self) -> &LaurentPoly<T> {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly<T> {
        &self.den
    }

    /// Cancels the gcd and normalizes the denominator.
    fn canonical(self) -> Self {
        let RationalFnT { mut num, mut den } = self;
        if num.is_zero() {
            return Self::from_poly(num);
        }
        let scale = num.scale_norm().max(den.scale_norm());
        let g = poly_gcd(&num.shift(-num.low), &den.shift(-den.low), scale);
        if g.coeffs.len() > 1 {
            num = num.divrem(&g, scale).0;
            den = den.divrem(&g, scale).0;
        }
        let k = den.low;
        num = num.shift(-k);
        den = den.shift(-k);
        let c0 = den.coeffs[0].clone();
        let inv = T::one() / c0;
        RationalFnT { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn add(&self, other: &Self) -> Self {
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        RationalFnT { num, den: self.den.mul(&other.den) }.canonical()
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFnT { num: self.num.mul(&other.num), den: self.den.mul(&other.den) }.canonical()
    }

    pub fn scale(&self, c: &T) -> Self {
        RationalFnT { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn shift(&self, k: i64) -> Self {
        RationalFnT { num: self.num.shift(k), den: self.den.clone() }
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.num.eval(t) / self.den.eval(t)
    }

    /// Equality by cross-multiplication, exact for exact scalars.
    pub fn equals(&self, other: &Self) -> bool {
        let lhs = self.num.mul(&other.den);
        let rhs = other.num.mul(&self.den);
        let scale = lhs.scale_norm().max(rhs.scale_norm());
        let d = lhs.sub(&rhs);
        d.coeffs.iter().all(|c| c.negligible(scale))
    }

    pub fn to_complex(&self) -> RationalFnT<Complex64> {
        let conv = |p: &LaurentPoly<T>| LaurentPoly { low: p.low, coeffs: p.coeffs.iter().map(|c| c.to_c64()).collect() };
        RationalFnT { num: conv(&self.num), den: conv(&self.den) }
    }

    /// `{"variable": "t=q^-s", "num": [...], "den": [...]}` with coefficient
    /// lists in increasing powers of t starting at t^0.
    pub fn to_json(&self) -> Value {
        let (mut num, mut den) = (self.num.clone(), self.den.clone());
        if num.low < 0 {
            den = den.shift(-num.low);
            num = num.shift(-num.low);
        }
        let dense = |p: &LaurentPoly<T>| -> Vec<Value> {
            match p.high() {
                None => vec![json!([0.0, 0.0])],
                Some(h) => (0..=h)
                    .map(|k| {
                        let c = p.coeff(k).to_c64();
                        json!([c.re, c.im])
                    })
                    .collect(),
            }
        };
        json!({"variable": "t=q^-s", "num": dense(&num), "den": dense(&den)})
    }
}

fn poly_gcd<T: Scalar>(a: &LaurentPoly<T>, b: &LaurentPoly<T>, scale: f64) -> LaurentPoly<T> {
    let (mut x, mut y) = (a.clone(), b.clone());
    if x.coeffs.len() < y.coeffs.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let (_, r) = x.divrem(&y, scale);
        let r = r.shift(-r.low);
        x = y;
        y = r;
    }
    x
}

/// Exact value `num/den` as a Gaussian rational.
pub fn exact(num: i64, den: i64) -> ExactComplex {
    Complex::new(Ratio::new(num, den), Ratio::zero())
}
