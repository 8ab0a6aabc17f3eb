//! Unramified harmonic analysis for PGL(2): spherical and Whittaker values,
//! local L-factors, the Plancherel density, and the torus-period check for
//! the basic function of `T\PGL(2)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::local_field::{AdditiveCharacter, PAdicNumber};

const TEMPERED_TOL: f64 = 1e-12;
const DEGENERATE_TOL: f64 = 1e-9;
const POLE_TOL: f64 = 1e-14;
/// Residual below which quadrature is at round-off and not expected to improve.
pub const QUADRATURE_FLOOR: f64 = 1e-13;

/// Satake parameter `diag(alpha, alpha^-1)` with residue cardinality `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SatakeParameter {
    pub alpha: Complex64,
    pub q: f64,
}

impl SatakeParameter {
    pub fn new(alpha: Complex64, q: f64) -> Result<Self> {
        if alpha.norm() == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be a nonzero finite complex number".into()));
        }
        if q.is_nan() || q <= 1.0 {
            return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
        }
        Ok(SatakeParameter { alpha, q })
    }

    /// `alpha = e^{i theta}`.
    pub fn tempered(theta: f64, q: f64) -> Result<Self> {
        Self::new(Complex64::from_polar(1.0, theta), q)
    }

    pub fn is_tempered(&self) -> bool {
        (self.alpha.norm() - 1.0).abs() <= TEMPERED_TOL
    }

    /// `alpha^2 = 1`, where the generic closed forms divide by zero.
    pub fn is_degenerate(&self) -> bool {
        (self.alpha * self.alpha - 1.0).norm() <= DEGENERATE_TOL
    }

    /// The Weyl conjugate `alpha^-1`.
    pub fn inverse(&self) -> Self {
        SatakeParameter { alpha: self.alpha.inv(), q: self.q }
    }

    /// `q^{1/2} (alpha + alpha^-1)`.
    pub fn hecke_eigenvalue(&self) -> Complex64 {
        self.q.sqrt() * (self.alpha + self.alpha.inv())
    }

    fn require_tempered(&self) -> Result<()> {
        if self.is_tempered() {
            Ok(())
        } else {
            Err(Error::NonTempered)
        }
    }
}

/// `s_k(alpha) = (alpha^{k+1} - alpha^{-k-1}) / (alpha - alpha^-1)` for
/// `k = 0..=n`, by the three-term recurrence; stable through `alpha^2 = 1`.
fn schur(alpha: Complex64, n: u32) -> Vec<Complex64> {
    let trace = alpha + alpha.inv();
    let mut out = vec![Complex64::new(1.0, 0.0), trace];
    while out.len() <= n as usize {
        let k = out.len();
        out.push(trace * out[k - 1] - out[k - 2]);
    }
    out.truncate(n as usize + 1);
    out
}

/// Zonal spherical function `c_n = m(diag(p^n, 1))` by Macdonald's formula
/// in the form `q^{-n/2} (s_n - q^-1 s_{n-2}) / (1 + q^-1)`.
pub fn spherical_function(s: &SatakeParameter, n: u32) -> Complex64 {
    let q = s.q;
    let sn = schur(s.alpha, n);
    let lower = match n {
        0 => Complex64::new(-1.0, 0.0),
        1 => Complex64::new(0.0, 0.0),
        _ => sn[n as usize - 2],
    };
    (sn[n as usize] - lower / q) * q.powf(-(n as f64) / 2.0) / (1.0 + 1.0 / q)
}

/// As [`spherical_function`], but refuses the degenerate locus.
pub fn spherical_function_strict(s: &SatakeParameter, n: u32) -> Result<Complex64> {
    if s.is_degenerate() {
        return Err(Error::DegenerateParameter);
    }
    Ok(spherical_function(s, n))
}

/// The sphere of radius `n` around the base vertex of the Bruhat-Tits tree,
/// as `(height, count)` relative to a fixed end.
fn sphere_heights(q: f64, n: u32) -> Vec<(i64, f64)> {
    let n = n as i64;
    if n == 0 {
        return vec![(0, 1.0)];
    }
    let mut out = vec![(-n, q.powi(n as i32)), (n, 1.0)];
    for k in 1..n {
        out.push((2 * k - n, (q - 1.0) * q.powi((n - k - 1) as i32)));
    }
    out
}

/// Reference value of `c_n`: the average of the horocyclic eigenfunction
/// `(q^{1/2} alpha)^height` over the sphere of radius `n`.
pub fn spherical_sphere_average(s: &SatakeParameter, n: u32) -> Complex64 {
    let z = s.q.sqrt() * s.alpha;
    let shells = sphere_heights(s.q, n);
    let total: f64 = shells.iter().map(|(_, c)| c).sum();
    shells.iter().map(|(h, c)| z.powi(*h as i32) * *c).sum::<Complex64>() / total
}

/// `|lambda c_n - (T c)_n|` where `T` sums over the `q + 1` neighbours.
pub fn spherical_hecke_residual(s: &SatakeParameter, n: u32) -> f64 {
    let c = |k: u32| spherical_function(s, k);
    let neighbours = if n == 0 { (s.q + 1.0) * c(1) } else { s.q * c(n + 1) + c(n - 1) };
    (s.hecke_eigenvalue() * c(n) - neighbours).norm()
}

/// Unramified Whittaker function `W(diag(p^n, 1))` by Casselman-Shalika,
/// normalized by `W_0 = 1`.
pub fn whittaker_function(s: &SatakeParameter, n: i64) -> Complex64 {
    if n < 0 {
        return Complex64::new(0.0, 0.0);
    }
    schur(s.alpha, n as u32)[n as usize] * s.q.powf(-(n as f64) / 2.0)
}

pub fn whittaker_function_strict(s: &SatakeParameter, n: i64) -> Result<Complex64> {
    if s.is_degenerate() {
        return Err(Error::DegenerateParameter);
    }
    Ok(whittaker_function(s, n))
}

/// `(T W)(diag(p^n, 1))` summed over the cosets `[[p, b], [0, 1]]`,
/// `b` in the residue field, and `diag(1, p)`.
pub fn whittaker_coset_sum(s: &SatakeParameter, n: i64, psi: &AdditiveCharacter) -> Result<Complex64> {
    let params = psi.params();
    let pn = PAdicNumber::p_power(params, n);
    let mut phase = Complex64::new(0.0, 0.0);
    for b in 0..params.q() as i64 {
        let x = PAdicNumber::from_int(params, b).mul(&pn)?;
        phase += if x.is_zero() { Complex64::new(1.0, 0.0) } else { psi.eval_complex(&x)? };
    }
    Ok(phase * whittaker_function(s, n + 1) + whittaker_function(s, n - 1))
}

/// `|lambda W_n - (T W)_n|` against the coset sum.
pub fn whittaker_hecke_residual(s: &SatakeParameter, n: i64, psi: &AdditiveCharacter) -> Result<f64> {
    if (psi.params().q() as f64 - s.q).abs() > 0.0 {
        return Err(Error::InvalidParameter("character and Satake parameter disagree on q".into()));
    }
    Ok((s.hecke_eigenvalue() * whittaker_function(s, n) - whittaker_coset_sum(s, n, psi)?).norm())
}

/// Representation of the dual group `SL(2)` through its torus weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LFactorSpec {
    Std,
    Adjoint,
    Sym2,
    /// `g/a` for the dual group: the root weights only.
    QuotientSpec,
    /// The trivial one-dimensional representation, i.e. `GL(1)`.
    Trivial,
    Weights(Vec<i32>),
}

impl LFactorSpec {
    pub fn weights(&self) -> Vec<i32> {
        match self {
            LFactorSpec::Std => vec![1, -1],
            LFactorSpec::Adjoint | LFactorSpec::Sym2 => vec![2, 0, -2],
            LFactorSpec::QuotientSpec => vec![2, -2],
            LFactorSpec::Trivial => vec![0],
            LFactorSpec::Weights(w) => w.clone(),
        }
    }

    pub fn parse(tag: &str) -> Result<Self> {
        Ok(match tag {
            "std" => LFactorSpec::Std,
            "adjoint" => LFactorSpec::Adjoint,
            "sym2" => LFactorSpec::Sym2,
            "quotient" | "quotient-spec" => LFactorSpec::QuotientSpec,
            "trivial" => LFactorSpec::Trivial,
            other => return Err(Error::InvalidParameter(format!("unknown representation `{other}`"))),
        })
    }
}

/// `prod_w (1 - alpha^w q^{-s})^{-1}`.
pub fn l_factor(sigma: &SatakeParameter, spec: &LFactorSpec, s: Complex64) -> Result<Complex64> {
    let t = Complex64::from(sigma.q).powc(-s);
    let mut out = Complex64::new(1.0, 0.0);
    for w in spec.weights() {
        let factor = 1.0 - sigma.alpha.powi(w) * t;
        if factor.norm() <= POLE_TOL {
            return Err(Error::PoleAt(format!("{}{:+}i", s.re, s.im)));
        }
        out /= factor;
    }
    Ok(out)
}

/// `mu(alpha) = L(g/a, 1) / L(g/a, 0)` against normalized Haar measure.
pub fn plancherel_density(s: &SatakeParameter) -> Result<f64> {
    s.require_tempered()?;
    let (a2, q) = (s.alpha * s.alpha, s.q);
    let num = (1.0 - a2) * (1.0 - a2.inv());
    let den = (1.0 - a2 / q) * (1.0 - a2.inv() / q);
    Ok((num / den).re.max(0.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusPeriod {
    pub value: Complex64,
    /// Bound on the omitted tail `2 sum_{n > N} |c_n|`.
    pub certified_tail: f64,
    pub truncation: u32,
}

/// `c_0 + 2 sum_{n=1}^N c_n`: the split-torus period of the spherical
/// function with unit Cartan volumes.
pub fn torus_period(s: &SatakeParameter, truncation: u32) -> Result<TorusPeriod> {
    s.require_tempered()?;
    let mut value = spherical_function(s, 0);
    for n in 1..=truncation {
        value += 2.0 * spherical_function(s, n);
    }
    Ok(TorusPeriod { value, certified_tail: torus_tail_bound(s.q, truncation), truncation })
}

/// `2 sum_{n > N} Xi(n)` where `Xi = c(alpha = 1)` dominates every tempered
/// spherical function.
pub fn torus_tail_bound(q: f64, truncation: u32) -> f64 {
    let r = q.powf(-0.5);
    let a = (1.0 - 1.0 / q) / (1.0 + 1.0 / q);
    let n = truncation as f64;
    let geometric = r.powf(n + 1.0) / (1.0 - r);
    let weighted = r.powf(n + 1.0) * ((n + 1.0) - n * r) / (1.0 - r).powi(2);
    2.0 * (geometric + a * weighted)
}

/// `L(std, 1/2)^2 / L(adjoint, 1)`.
pub fn lvalue_quotient(s: &SatakeParameter) -> Result<Complex64> {
    let std = l_factor(s, &LFactorSpec::Std, Complex64::new(0.5, 0.0))?;
    let ad = l_factor(s, &LFactorSpec::Adjoint, Complex64::new(1.0, 0.0))?;
    Ok(std * std / ad)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodCheck {
    pub q: f64,
    pub truncation: u32,
    pub ratios: Vec<Complex64>,
    /// `R(alpha)` at the first parameter.
    pub constant: Complex64,
    pub max_relative_deviation: f64,
    pub certified_tail: f64,
}

/// `R(alpha) = torus_period / lvalue_quotient` and its spread over `alphas`.
pub fn period_check(q: f64, truncation: u32, alphas: &[Complex64]) -> Result<PeriodCheck> {
    if alphas.is_empty() {
        return Err(Error::InvalidParameter("no Satake parameters given".into()));
    }
    let mut ratios = Vec::with_capacity(alphas.len());
    for a in alphas {
        let s = SatakeParameter::new(*a, q)?;
        ratios.push(torus_period(&s, truncation)?.value / lvalue_quotient(&s)?);
    }
    let mut dev: f64 = 0.0;
    for x in &ratios {
        for y in &ratios {
            dev = dev.max((x - y).norm() / y.norm());
        }
    }
    Ok(PeriodCheck {
        q,
        truncation,
        constant: ratios[0],
        ratios,
        max_relative_deviation: dev,
        certified_tail: torus_tail_bound(q, truncation),
    })
}

/// The five parameters of the ratio-constancy criterion.
pub fn reference_alphas() -> Vec<Complex64> {
    [0.0, PI / 2.0, PI / 5.0, 2.0, PI - 0.1].iter().map(|t| Complex64::from_polar(1.0, *t)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlancherelCheck {
    pub mass: f64,
    pub target: f64,
    pub residual: f64,
    /// Residual at `2M`, used for the refinement check.
    pub refined_residual: f64,
}

/// Orthogonality degrees tested alongside the mass.
const INVERSION_DEGREES: u32 = 8;

fn plancherel_residual(q: f64, points: usize) -> Result<(f64, f64)> {
    let weight = (1.0 + 1.0 / q) / 2.0;
    let mut moments = vec![0.0; INVERSION_DEGREES as usize + 1];
    for j in 0..points {
        let s = SatakeParameter::tempered(2.0 * PI * (j as f64 + 0.5) / points as f64, q)?;
        let mu = plancherel_density(&s)? * weight / points as f64;
        for (n, m) in moments.iter_mut().enumerate() {
            *m += spherical_function(&s, n as u32).re * mu;
        }
    }
    let mass = moments[0];
    let residual = moments[1..].iter().fold((mass - 1.0).abs(), |r, m| r.max(m.abs()));
    Ok((mass, residual))
}

/// Recovers `||1_K||^2 = 1` by integrating `J_alpha(1_K (x) 1_K) = m_alpha(1)`
/// against the group-case Plancherel measure `(1 + q^-1)/|W| mu(alpha) dphi`,
/// together with the orthogonality `int c_n = 0` for `1 <= n <= 8`.
/// Midpoint nodes avoid the zeros at `alpha = +-1`.
pub fn plancherel_inversion_check(q: f64, points: usize) -> Result<PlancherelCheck> {
    if points < 64 {
        return Err(Error::InvalidParameter(format!("need at least 64 quadrature points, got {points}")));
    }
    if q.is_nan() || q <= 1.0 {
        return Err(Error::InvalidParameter(format!("q must exceed 1, got {q}")));
    }
    let (mass, residual) = plancherel_residual(q, points)?;
    let (_, refined_residual) = plancherel_residual(q, 2 * points)?;
    if refined_residual > residual.max(QUADRATURE_FLOOR) {
        return Err(Error::QuadratureUnstable);
    }
    Ok(PlancherelCheck { mass, target: 1.0, residual, refined_residual })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_representation_is_constant() {
        let s = SatakeParameter::new(Complex64::from(5f64.sqrt()), 5.0).unwrap();
        for n in 0..10 {
            assert!((spherical_function(&s, n) - 1.0).norm() < 1e-12);
        }
    }

    #[test]
    fn degenerate_limit_is_continuous() {
        let near = SatakeParameter::tempered(1e-4, 3.0).unwrap();
        let at = SatakeParameter::tempered(0.0, 3.0).unwrap();
        assert!(at.is_degenerate());
        for n in 0..6 {
            assert!((spherical_function(&near, n) - spherical_function(&at, n)).norm() < 1e-6);
            assert!((whittaker_function(&near, n as i64) - whittaker_function(&at, n as i64)).norm() < 1e-6);
        }
        assert_eq!(spherical_function_strict(&at, 1), Err(Error::DegenerateParameter));
    }

    #[test]
    fn sphere_sizes() {
        for n in 1..6 {
            let total: f64 = sphere_heights(3.0, n).iter().map(|(_, c)| c).sum();
            assert_eq!(total, 4.0 * 3f64.powi(n as i32 - 1));
        }
    }
}
