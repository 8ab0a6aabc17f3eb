use std::collections::BTreeMap;

use num_traits::One;

use super::poly::{rat, Coeff, MPoly, Monomial, QuotElem, Ring, Var, NVARS};
use crate::error::{Error, Result};

/// `num / den` in the fraction field of the quotient ring; equality is
/// decided by cross-multiplication.
#[derive(Debug, Clone, PartialEq)]
pub struct Frac {
    num: MPoly,
    den: MPoly,
}

impl Frac {
    pub fn new(num: MPoly, den: MPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        Frac { num, den }.normalized()
    }

    pub fn poly(p: MPoly) -> Self {
        Frac { num: p, den: MPoly::one() }
    }

    pub fn var(v: Var) -> Self {
        Self::poly(MPoly::var(v))
    }

    pub fn int(n: i64) -> Self {
        Self::poly(MPoly::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::poly(MPoly::ratio(n, d))
    }

    pub fn zero() -> Self {
        Self::int(0)
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Folds a monomial denominator's constant and Laurent part into the numerator.
    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Frac::zero();
        }
        if let Some((m, c)) = self.den.as_term() {
            let mut laurent: Monomial = [0; NVARS];
            let mut rest = m;
            for v in Var::ALL.iter().filter(|v| v.is_laurent()) {
                laurent[v.index()] = -m[v.index()];
                rest[v.index()] = 0;
            }
            self.num = self.num.shift(&laurent).scale(Coeff::one() / c);
            self.den = MPoly::term(Coeff::one(), rest);
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Frac { num: self.num.add(&other.num), den: self.den.clone() }.normalized();
        }
        Frac::new(self.num.mul(&other.den).add(&other.num.mul(&self.den)), self.den.mul(&other.den))
    }

    pub fn neg(&self) -> Self {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Frac::zero();
        }
        Frac::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn inv(&self) -> Self {
        Frac::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn scale(&self, c: Coeff) -> Self {
        Frac { num: self.num.scale(c), den: self.den.clone() }.normalized()
    }

    pub fn powi(&self, k: i32) -> Self {
        let base = if k < 0 { self.inv() } else { self.clone() };
        (0..k.unsigned_abs()).fold(Frac::one(), |acc, _| acc.mul(&base))
    }

    /// Formal partial derivative by the quotient rule.
    pub fn partial(&self, v: Var) -> Self {
        let dn = self.num.derivative(v);
        let dd = self.den.derivative(v);
        if dd.is_zero() {
            return Frac::new(dn, self.den.clone());
        }
        Frac::new(dn.mul(&self.den).sub(&self.num.mul(&dd)), self.den.mul(&self.den))
    }

    /// Replaces every coordinate by the given fraction.
    pub fn substitute(&self, images: &[Frac; NVARS]) -> Frac {
        let eval = |p: &MPoly| {
            p.terms().fold(Frac::zero(), |acc, (m, c)| {
                let t = Var::ALL.iter().fold(Frac::poly(MPoly::constant(c.clone())), |t, v| {
                    let e = m[v.index()];
                    if e == 0 {
                        t
                    } else {
                        t.mul(&images[v.index()].powi(e))
                    }
                });
                acc.add(&t)
            })
        };
        eval(&self.num).div(&eval(&self.den))
    }

    /// `other.num * self.den - self.num * other.den`, reduced; zero iff equal.
    pub fn witness(&self, other: &Frac, ring: &Ring) -> QuotElem {
        ring.reduce(&other.num.mul(&self.den).sub(&self.num.mul(&other.den)))
    }

    pub fn equals(&self, other: &Frac, ring: &Ring) -> bool {
        self.witness(other, ring).is_zero()
    }
}

/// Differential forms in the basis `dt1, dxi, dz, dtau`; `dt0` and `drho`
/// are eliminated through the ring relations.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffForm {
    degree: usize,
    terms: BTreeMap<u8, Frac>,
}

pub const BASIS: [Var; 4] = [Var::T1, Var::Xi, Var::Z, Var::Tau];

fn basis_slot(v: Var) -> Option<usize> {
    BASIS.iter().position(|b| *b == v)
}

fn wedge_sign(a: u8, b: u8) -> i64 {
    let mut inversions = 0;
    for i in 0..4 {
        if a & (1 << i) != 0 {
            inversions += (b & ((1u8 << i) - 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

impl DiffForm {
    pub fn zero(degree: usize) -> Self {
        DiffForm { degree, terms: BTreeMap::new() }
    }

    pub fn function(f: Frac) -> Self {
        let mut out = Self::zero(0);
        out.push(0, f);
        out
    }

    /// `dv` for a basis coordinate.
    pub fn basis(v: Var) -> Self {
        let slot = basis_slot(v).expect("basis coordinate");
        let mut out = Self::zero(1);
        out.push(1 << slot, Frac::one());
        out
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (u8, &Frac)> {
        self.terms.iter().map(|(m, f)| (*m, f))
    }

    fn push(&mut self, mask: u8, f: Frac) {
        if f.is_zero() {
            return;
        }
        let next = match self.terms.remove(&mask) {
            Some(g) => g.add(&f),
            None => f,
        };
        if !next.is_zero() {
            self.terms.insert(mask, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (m, f) in &other.terms {
            out.push(*m, f.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&Frac::int(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, f: &Frac) -> Self {
        let mut out = Self::zero(self.degree);
        for (m, g) in &self.terms {
            out.push(*m, g.mul(f));
        }
        out
    }

    pub fn wedge(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.degree + other.degree);
        for (ma, fa) in &self.terms {
            for (mb, fb) in &other.terms {
                if ma & mb != 0 {
                    continue;
                }
                out.push(ma | mb, fa.mul(fb).scale(rat(wedge_sign(*ma, *mb), 1)));
            }
        }
        out
    }

    /// True when every coefficient reduces to 0.
    pub fn vanishes(&self, ring: &Ring) -> bool {
        self.terms.values().all(|f| ring.reduce(f.num()).is_zero())
    }
}

/// Outcome of [`form_equal`].
#[derive(Debug, Clone, PartialEq)]
pub struct FormComparison {
    pub equal: bool,
    pub witness: Option<QuotElem>,
}

impl Ring {
    /// Differential of a coordinate, with `dt0 = d(t0^2)/(2 t0)` and
    /// `drho = d(rho^2)/(2 rho)` read off the relations.
    pub fn coordinate_differential(&self, v: Var) -> DiffForm {
        match v {
            Var::T0 | Var::Rho => {
                let (square, root) = if v == Var::T0 { (self.t0_square(), Var::T0) } else { (self.rho_square(), Var::Rho) };
                let twice_root = Frac::poly(MPoly::var(root).scale(rat(2, 1)));
                let mut out = DiffForm::zero(1);
                for b in BASIS {
                    out.push(1 << basis_slot(b).unwrap(), Frac::poly(square.derivative(b)).div(&twice_root));
                }
                out
            }
            _ => DiffForm::basis(v),
        }
    }

    pub fn d_function(&self, f: &Frac) -> DiffForm {
        let mut out = DiffForm::zero(1);
        for v in Var::ALL {
            let p = f.partial(v);
            if !p.is_zero() {
                out = out.add(&self.coordinate_differential(v).scale(&p));
            }
        }
        out
    }

    pub fn d(&self, omega: &DiffForm) -> DiffForm {
        let mut out = DiffForm::zero(omega.degree + 1);
        for (m, f) in &omega.terms {
            let mut unit = DiffForm::zero(omega.degree);
            unit.push(*m, Frac::one());
            out = out.add(&self.d_function(f).wedge(&unit));
        }
        out
    }

    /// `sigma^* omega` for the substitution sending each coordinate to `images`.
    pub fn pullback(&self, omega: &DiffForm, images: &[Frac; NVARS]) -> DiffForm {
        let mut out = DiffForm::zero(omega.degree);
        for (m, f) in &omega.terms {
            let mut piece = DiffForm::function(f.substitute(images));
            for (slot, b) in BASIS.iter().enumerate() {
                if m & (1 << slot) != 0 {
                    piece = piece.wedge(&self.d_function(&images[b.index()]));
                }
            }
            out = out.add(&piece);
        }
        out
    }

    pub fn form_equal(&self, a: &DiffForm, b: &DiffForm) -> Result<FormComparison> {
        if a.degree != b.degree {
            return Err(Error::DegreeMismatch(a.degree, b.degree));
        }
        let masks: std::collections::BTreeSet<u8> = a.terms.keys().chain(b.terms.keys()).copied().collect();
        for m in masks {
            let fa = a.terms.get(&m).cloned().unwrap_or_else(Frac::zero);
            let fb = b.terms.get(&m).cloned().unwrap_or_else(Frac::zero);
            let w = fa.witness(&fb, self);
            if !w.is_zero() {
                return Ok(FormComparison { equal: false, witness: Some(w) });
            }
        }
        Ok(FormComparison { equal: true, witness: None })
    }
}

/// `sum_I f_I dx_I` with zero coefficients treated as absent.
pub fn form_from_terms(degree: usize, terms: impl IntoIterator<Item = (Vec<Var>, Frac)>) -> DiffForm {
    let mut out = DiffForm::zero(degree);
    for (vars, f) in terms {
        assert_eq!(vars.len(), degree);
        let piece = vars.iter().fold(DiffForm::function(f), |acc, v| acc.wedge(&DiffForm::basis(*v)));
        out = out.add(&piece);
    }
    out
}
