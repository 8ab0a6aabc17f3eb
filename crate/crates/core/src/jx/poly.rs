use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub const NVARS: usize = 6;

/// Coordinates on the regular-centralizer schemes. `T1` and `Z` are
/// invertible; `Rho` is a square root of `Xi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    T0,
    T1,
    Xi,
    Z,
    Tau,
    Rho,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::T0, Var::T1, Var::Xi, Var::Z, Var::Tau, Var::Rho];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_laurent(self) -> bool {
        matches!(self, Var::T1 | Var::Z)
    }

    fn symbol(self) -> &'static str {
        match self {
            Var::T0 => "t0",
            Var::T1 => "t1",
            Var::Xi => "xi",
            Var::Z => "z",
            Var::Tau => "tau",
            Var::Rho => "rho",
        }
    }
}

pub type Monomial = [i32; NVARS];

/// Exact rational coefficient.
pub type Coeff = BigRational;

/// `n / d` as a coefficient.
pub fn rat(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}

/// Polynomial over Q, Laurent in `t1` and `z`, in canonical sorted form.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct MPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, [0; NVARS])
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n, 1))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(rat(n, d))
    }

    pub fn var(v: Var) -> Self {
        let mut m = [0; NVARS];
        m[v.index()] = 1;
        Self::term(Coeff::one(), m)
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The single term, when there is exactly one.
    pub fn as_term(&self) -> Option<(Monomial, Coeff)> {
        (self.terms.len() == 1).then(|| self.terms.iter().next().map(|(m, c)| (*m, c.clone())).unwrap())
    }

    pub fn degree_in(&self, v: Var) -> i32 {
        self.terms.keys().map(|m| m[v.index()]).max().unwrap_or(0)
    }

    fn add_term(&mut self, m: Monomial, c: Coeff) {
        let e = self.terms.entry(m).or_insert_with(Coeff::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: Coeff) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MPoly { terms: self.terms.iter().map(|(m, a)| (*m, a * &c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mut m = *ma;
                for i in 0..NVARS {
                    m[i] += mb[i];
                }
                out.add_term(m, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Formal partial derivative.
    pub fn derivative(&self, v: Var) -> Self {
        let i = v.index();
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            if m[i] != 0 {
                let mut n = *m;
                n[i] -= 1;
                out.add_term(n, c * rat(m[i] as i64, 1));
            }
        }
        out
    }

    /// Multiplies through by a monomial with arbitrary integer exponents.
    pub fn shift(&self, m: &Monomial) -> Self {
        MPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let mut n = *k;
                    for i in 0..NVARS {
                        n[i] += m[i];
                    }
                    (n, c.clone())
                })
                .collect(),
        }
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = c.abs();
            let vars: Vec<String> = Var::ALL
                .iter()
                .filter(|v| m[v.index()] != 0)
                .map(|v| match m[v.index()] {
                    1 => v.symbol().to_string(),
                    e => format!("{}^{}", v.symbol(), e),
                })
                .collect();
            match (vars.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", vars.join("*"))?,
                (false, false) => write!(f, "{a}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

/// `t0^2 -> t0_square` and `rho^2 -> rho_square`, applied until the
/// `t0`- and `rho`-degrees are at most 1. Both leading terms are pure
/// powers of distinct variables, so the rewriting is confluent.
#[derive(Debug, Clone, PartialEq)]
pub struct Ring {
    t0_square: MPoly,
    rho_square: MPoly,
}

/// An element of the quotient ring in reduced form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuotElem(MPoly);

impl QuotElem {
    pub fn poly(&self) -> &MPoly {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl fmt::Display for QuotElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Default for Ring {
    fn default() -> Self {
        Self::with_relation_constant(1)
    }
}

impl Ring {
    /// `F[t0, t1^{+-1}, xi, z^{+-1}, tau, rho] / (t0^2 - xi t1^2 - k, rho^2 - xi)`;
    /// `k = 1` is the centralizer relation, other values are controls.
    pub fn with_relation_constant(k: i64) -> Self {
        let xi_t1_sq = MPoly::var(Var::Xi).mul(&MPoly::var(Var::T1).pow(2));
        Ring { t0_square: xi_t1_sq.add(&MPoly::int(k)), rho_square: MPoly::var(Var::Xi) }
    }

    pub fn t0_square(&self) -> &MPoly {
        &self.t0_square
    }

    pub fn rho_square(&self) -> &MPoly {
        &self.rho_square
    }

    /// The generator `t0^2 - t0_square`.
    pub fn relation(&self) -> MPoly {
        MPoly::var(Var::T0).pow(2).sub(&self.t0_square)
    }

    pub fn reduce(&self, p: &MPoly) -> QuotElem {
        let mut pending = p.clone();
        let mut done = MPoly::zero();
        while !pending.is_zero() {
            let mut next = MPoly::zero();
            for (m, c) in pending.terms() {
                let (i, sub) = if m[Var::T0.index()] >= 2 {
                    (Var::T0.index(), &self.t0_square)
                } else if m[Var::Rho.index()] >= 2 {
                    (Var::Rho.index(), &self.rho_square)
                } else {
                    done.add_term(*m, c.clone());
                    continue;
                };
                let mut rest = *m;
                rest[i] -= 2;
                next = next.add(&sub.shift(&rest).scale(c.clone()));
            }
            pending = next;
        }
        QuotElem(done)
    }
}
