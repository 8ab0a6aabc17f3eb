use std::collections::HashMap;

use num_complex::Complex64;

use super::{ball_shape, check_kuznetsov, real, relative_residual, TransferKernelT, XTestData, IMAGE_TOL};
use crate::error::{Error, Result};
use crate::local_field::{
    inv_mod, pow_u128, AdditiveCharacter, FieldParams, MultiplicativeCharacter, PAdicNumber, UnitGroup,
};
use crate::schwartz::{oscillatory_integral, Ball, LaurentPoly, SchwartzFunction, DEFAULT_BUDGET};

fn v4(p: u64) -> i64 {
    if p == 2 {
        2
    } else {
        0
    }
}

/// Evaluates `F(c') = f(4c') abs(4c')^{-e1}` by the nested shell sum
///
/// `F(c') = abs(c')^{-e2} sum_j q^{-j(e2-e1)} avg_{v(u)=j} psi(u) I(c'/u)`,
/// `I(y) = int Phi(x) abs(x)^{e2} psi(y/x) d^x x`,
///
/// where `I(y)` depends on `y mod p^{c + kmax}` and vanishes for
/// `v(y) < kmin_i`.
struct ShellSum<'a> {
    params: FieldParams,
    phi: &'a SchwartzFunction,
    psi: &'a AdditiveCharacter,
    weight: MultiplicativeCharacter,
    e1: f64,
    e2: f64,
    kmax: i64,
    kmin_i: i64,
    cache: HashMap<(i64, u128), Complex64>,
}

impl ShellSum<'_> {
    fn inner(&mut self, vy: i64, unit: u128, digits: u32) -> Result<Complex64> {
        let p = self.params.p();
        let key_unit = if digits == 0 { 0 } else { unit % pow_u128(p, digits) };
        if let Some(v) = self.cache.get(&(vy, key_unit)) {
            return Ok(*v);
        }
        let y = PAdicNumber::from_parts(self.params, vy, if digits == 0 { 1 } else { key_unit as u64 }, digits.max(1))?;
        let q = p as f64;
        let v = oscillatory_integral(self.phi, &y, &self.weight, self.psi)?.value / (1.0 - 1.0 / q);
        self.cache.insert((vy, key_unit), v);
        Ok(v)
    }

    fn value(&mut self, n: i64, nu: u128) -> Result<Complex64> {
        let p = self.params.p();
        let q = p as f64;
        let c = self.psi.conductor();
        let mut acc = Complex64::new(0.0, 0.0);
        let mut j = n - self.kmin_i;
        loop {
            let d_psi = c - j;
            let d_i = c + self.kmax - n + j;
            if d_psi >= 2 && d_psi > d_i {
                break;
            }
            let level = d_psi.max(d_i).max(1) as u32;
            let modulus = pow_u128(p, level);
            let count = modulus - modulus / p as u128;
            if count > DEFAULT_BUDGET {
                return Err(Error::RefinementOverflow { needed: count, budget: DEFAULT_BUDGET });
            }
            let di = d_i.max(0) as u32;
            let mod_i = pow_u128(p, di.max(1));
            let mod_psi = pow_u128(p, d_psi.max(0) as u32);
            let mut s = Complex64::new(0.0, 0.0);
            for mu in (1..modulus).filter(|m| m % p as u128 != 0) {
                let phase = if d_psi > 0 { self.psi.phase(j, mu % mod_psi).to_complex() } else { real(1.0) };
                let y_unit = nu % mod_i * inv_mod(mu % mod_i, mod_i).unwrap() % mod_i;
                s += phase * self.inner(n - j, y_unit, di)?;
            }
            acc += s / count as f64 * q.powf(-(j as f64) * (self.e2 - self.e1));
            j -= 1;
        }
        Ok(acc * q.powf(n as f64 * self.e2))
    }
}

/// The type-T transfer, represented on the valuation window
/// `[v(4) + kmin + 2(c - M'), v(4) + kmax + 2c + 2]` of `c`, below which it
/// vanishes exactly. `M' = max(1, deepest ball)`; the output is invariant
/// under `1 + p^{M'} Z_p`.
pub fn transfer_t(phi: &SchwartzFunction, kernel: &TransferKernelT, psi: &AdditiveCharacter) -> Result<XTestData> {
    let params = phi.params();
    let p = params.p();
    let q = p as f64;
    let phi = check_kuznetsov(phi)?;
    if phi.terms().is_empty() {
        return Ok(XTestData::compact(SchwartzFunction::zero(params)));
    }
    let shape = ball_shape(&phi);
    let c = psi.conductor();
    let kmin = shape.iter().map(|s| s.0).min().unwrap();
    let kmax = shape.iter().map(|s| s.0).max().unwrap();
    let mp = shape.iter().map(|s| s.1).max().unwrap().max(1);
    let kmin_i = c + shape.iter().map(|&(k, w)| k - w.max(1) as i64).min().unwrap();
    let (nlo, nhi) = (kmin + 2 * (c - mp as i64), kmax + 2 * c + 2);
    let mut sum = ShellSum {
        params,
        phi: &phi,
        psi,
        weight: MultiplicativeCharacter::abs_power(params, real(kernel.e2() - 1.0)),
        e1: kernel.e1(),
        e2: kernel.e2(),
        kmax,
        kmin_i,
        cache: HashMap::new(),
    };
    let four = PAdicNumber::from_int(params, 4);
    let shift = v4(p);
    let units = UnitGroup::new(p, mp);
    let mut terms = Vec::new();
    for n in nlo..=nhi {
        for &nu in units.elements() {
            let value = sum.value(n, nu)? * q.powf(-((n + shift) as f64) * kernel.e1());
            let center = PAdicNumber::from_parts(params, n, nu as u64, mp)?.mul(&four)?;
            terms.push((Ball::new(center, n + shift + mp as i64)?, value));
        }
    }
    let f = SchwartzFunction::new(params, terms)?.try_normalize()?;
    Ok(XTestData { f, window: Some((nlo + shift, nhi + shift)) })
}

/// `sum_j g_j q^{e j} t^j (1 - q^e t)` where `g_j = avg_units psi(p^j u) omega(u)`;
/// for trivial `omega` the closed form `a^{c-1}(qa - 1)/(q - 1)`, `a = q^e t`.
fn gauss_numerator(
    units: &UnitGroup,
    omega: &[u64],
    e: f64,
    psi: &AdditiveCharacter,
) -> LaurentPoly<Complex64> {
    let p = units.p();
    let q = p as f64;
    let c = psi.conductor();
    let qe = q.powf(e);
    if UnitGroup::is_trivial(omega) {
        return LaurentPoly::from_coeffs(
            c - 1,
            vec![real(-qe.powi((c - 1) as i32) / (q - 1.0)), real(q * qe.powi(c as i32) / (q - 1.0))],
        );
    }
    let mp = units.level();
    let mut poly = LaurentPoly::zero();
    for depth in 1..=mp + 1 {
        let level = depth.max(mp);
        let modulus = pow_u128(p, level);
        let mod_d = pow_u128(p, depth);
        let mut s = Complex64::new(0.0, 0.0);
        let mut count = 0.0;
        for mu in (1..modulus).filter(|m| m % p as u128 != 0) {
            s += psi.phase(c - depth as i64, mu % mod_d).to_complex() * units.value(omega, mu);
            count += 1.0;
        }
        let j = c - depth as i64;
        poly = poly.add(&LaurentPoly::monomial(s / count * qe.powi(j as i32), j));
    }
    poly.mul(&LaurentPoly::from_coeffs(0, vec![real(1.0), real(-qe)]))
}

fn restrict(f: &SchwartzFunction, lo: i64, hi: i64) -> SchwartzFunction {
    let terms = f
        .terms()
        .iter()
        .filter(|(b, _)| b.valuation().is_some_and(|v| v >= lo && v <= hi))
        .cloned()
        .collect();
    SchwartzFunction::new(f.params(), terms).unwrap().normalize()
}

/// Inverse of [`transfer_t`] by deconvolution in each unit character:
/// with `F(c') = f(4c') abs(4c')^{-e1}`, `F_omega = Phi_omega A_omega B_omega`
/// where `A_omega (1 - a)` and `B_omega (1 - b)` are Laurent polynomials.
/// Division runs from the top degree, so the window must extend two shells
/// past the top of `F_omega (1 - a)(1 - b)`.
pub fn inverse_transfer_t(x: &XTestData, kernel: &TransferKernelT, psi: &AdditiveCharacter) -> Result<SchwartzFunction> {
    let f = x.f.try_normalize()?;
    let params = f.params();
    if f.terms().is_empty() {
        return Ok(SchwartzFunction::zero(params));
    }
    let p = params.p();
    let q = p as f64;
    let (clo, chi) = x.window.ok_or_else(|| Error::InvalidParameter("type-T data needs a valuation window".into()))?;
    let shift = v4(p);
    let (nlo, nhi) = (clo - shift, chi - shift);
    let mut mp = 1;
    for (b, _) in f.terms() {
        let v = b.valuation().ok_or(Error::SupportAtZero)?;
        if v < clo || v > chi {
            return Err(Error::InvalidParameter(format!("ball at valuation {v} outside window [{clo}, {chi}]")));
        }
        mp = mp.max(b.unit_class().unwrap().1);
    }
    let units = UnitGroup::new(p, mp);
    let chars = units.characters();
    let modulus = units.modulus();
    let four_unit = if p == 2 { 1 } else { 4 % modulus };
    let inv4 = inv_mod(four_unit, modulus).unwrap();
    let width = (nhi - nlo + 1) as usize;
    let mut coeffs = vec![vec![Complex64::new(0.0, 0.0); width]; chars.len()];
    let order = units.order() as f64;
    for (b, coeff) in f.terms() {
        let (u, w) = b.unit_class().unwrap();
        let vc = b.valuation().unwrap();
        let step = pow_u128(p, w);
        let nu = u % step * inv4 % step;
        let scale = coeff * q.powf(vc as f64 * kernel.e1()) / order;
        for &mu in units.elements().iter().filter(|&&m| m % step == nu) {
            for (ci, omega) in chars.iter().enumerate() {
                coeffs[ci][(vc - shift - nlo) as usize] += scale * units.value(omega, mu);
            }
        }
    }
    let a = LaurentPoly::from_coeffs(0, vec![real(1.0), real(-q.powf(kernel.e1()))]);
    let b = LaurentPoly::from_coeffs(0, vec![real(1.0), real(-q.powf(kernel.e2()))]);
    let polys: Vec<_> = coeffs.into_iter().map(|cw| LaurentPoly::from_coeffs(nlo, cw)).collect();
    let scale = polys.iter().map(|fw| fw.max_norm()).fold(0.0, f64::max).max(1e-300);
    let mut quotients = Vec::with_capacity(chars.len());
    for (omega, fw) in chars.iter().zip(&polys) {
        let g = fw.mul(&a).mul(&b).truncate_above(nhi);
        let margin = g.coeff(nhi).norm().max(g.coeff(nhi - 1).norm()) / scale;
        if margin > IMAGE_TOL {
            return Err(Error::NotInImage { residual: margin });
        }
        if g.max_norm() <= 1e-13 * scale {
            quotients.push(LaurentPoly::zero());
            continue;
        }
        let n = gauss_numerator(&units, omega, kernel.e1(), psi).mul(&gauss_numerator(&units, omega, kernel.e2(), psi));
        let (quot, rem) = g.div_rem(&n);
        let residual = rem.max_norm() / scale;
        if residual > IMAGE_TOL {
            return Err(Error::NotInImage { residual });
        }
        quotients.push(quot);
    }
    let lo = quotients.iter().filter(|qp| !qp.is_zero()).map(|qp| qp.low()).min();
    let hi = quotients.iter().filter_map(|qp| qp.high()).max();
    let mut terms = Vec::new();
    if let (Some(lo), Some(hi)) = (lo, hi) {
        for k in lo..=hi {
            for &nu in units.elements() {
                let v: Complex64 =
                    chars.iter().zip(&quotients).map(|(omega, qp)| qp.coeff(k) * units.value(omega, nu).conj()).sum();
                let center = PAdicNumber::from_parts(params, k, nu as u64, mp)?;
                terms.push((Ball::new(center, k + mp as i64)?, v));
            }
        }
    }
    let phi = SchwartzFunction::new(params, terms)?.try_normalize()?;
    let image = transfer_t(&phi, kernel, psi)?;
    let (lo, hi) = match image.window {
        Some((a, b)) => (a.max(clo), b.min(chi)),
        None => (clo, chi),
    };
    let residual = relative_residual(&restrict(&image.f, lo, hi), &restrict(&f, lo, hi));
    if residual > IMAGE_TOL {
        return Err(Error::NotInImage { residual });
    }
    Ok(phi)
}
