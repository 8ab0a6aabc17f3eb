//! Brute-force residue sums used as references for the transfer operators.
//!
//! Each oracle refines the integration variables until every factor of the
//! integrand is constant on a cell and sums cell values directly. They share
//! no code with the operators beyond p-adic arithmetic and ball membership.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::local_field::{pow_u128, AdditiveCharacter, FieldParams, PAdicNumber};
use crate::schwartz::SchwartzFunction;
use crate::transfer::{SymSqKernel, SymSqTestData, TransferKernelG, TransferKernelT};

/// Points `p^j u` with `u` running over units mod `p^digits`.
fn shell_points(params: FieldParams, j: i64, digits: u32) -> Result<Vec<PAdicNumber>> {
    let p = params.p();
    let modulus = pow_u128(p, digits);
    (1..modulus)
        .filter(|u| u % p as u128 != 0)
        .map(|u| PAdicNumber::from_parts(params, j, u as u64, digits))
        .collect()
}

/// `f(t0) = int Phi(t1) psi(t0/t1) abs(t1)^{(d-3)/2} dt1`.
pub fn type_g_brute_force(
    phi: &SchwartzFunction,
    kernel: &TransferKernelG,
    psi: &AdditiveCharacter,
    t0: &PAdicNumber,
) -> Result<Complex64> {
    let e = kernel.weight_exponent();
    let v0 = t0.valuation().ok_or(Error::UnsupportedGerm)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (b, c) in phi.terms() {
        let k = b.valuation().ok_or(Error::SupportAtZero)?;
        let w = b.radius() - k;
        let need = (psi.conductor() - v0 + k).max(w).max(1);
        for cell in b.subdivide((need - w) as u32)? {
            let t1 = cell.center();
            acc += c * psi.eval_complex(&t0.div(t1)?)? * t1.abs().powf(e) * cell.volume();
        }
    }
    Ok(acc)
}

/// `f(c) = abs(c)^{e1} int int Phi(c/(4uv)) abs(u)^{-e1} abs(v)^{-e2} psi(u+v) d^x u d^x v`
/// with `d^x` giving the units volume 1.
///
/// A shell `v(u) = j` contributes nothing once `j + m < cond(psi)`, where `m`
/// is the relative depth of `Phi`; the same holds for `v`.
pub fn type_t_brute_force(
    phi: &SchwartzFunction,
    kernel: &TransferKernelT,
    psi: &AdditiveCharacter,
    c: &PAdicNumber,
) -> Result<Complex64> {
    let params = phi.params();
    let q = params.q() as f64;
    let phi = phi.try_normalize()?;
    if phi.terms().is_empty() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut kmin = i64::MAX;
    let mut kmax = i64::MIN;
    let mut m = 1;
    for (b, _) in phi.terms() {
        let k = b.valuation().ok_or(Error::SupportAtZero)?;
        kmin = kmin.min(k);
        kmax = kmax.max(k);
        m = m.max(b.radius() - k);
    }
    let cond = psi.conductor();
    let four = PAdicNumber::from_int(params, 4);
    let vc = c.valuation().ok_or(Error::UnsupportedGerm)?;
    let n = vc - four.valuation().unwrap();
    let lowest = cond - m - 1;
    let (e1, e2) = (kernel.e1(), kernel.e2());
    let digits = |j: i64| (cond - j).max(m).max(1) as u32;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in lowest..=n - kmin - lowest {
        let du = digits(j);
        let us: Vec<_> = shell_points(params, j, du)?
            .into_iter()
            .map(|u| Ok((four.mul(&u)?, psi.eval_complex(&u)?)))
            .collect::<Result<_>>()?;
        let wu = q.powi(-(du as i32)) / (1.0 - 1.0 / q) * q.powf(j as f64 * e1);
        for l in (n - j - kmax).max(lowest)..=n - j - kmin {
            let dv = digits(l);
            let wv = q.powi(-(dv as i32)) / (1.0 - 1.0 / q) * q.powf(l as f64 * e2);
            for v in shell_points(params, l, dv)? {
                let pv = psi.eval_complex(&v)?;
                let mut s = Complex64::new(0.0, 0.0);
                for (four_u, pu) in &us {
                    s += phi.evaluate(&c.div(&four_u.mul(&v)?)?)? * pu;
                }
                acc += s * pv * wu * wv;
            }
        }
    }
    Ok(acc * c.abs().powf(e1))
}

/// Direct double residue sum for the symmetric-square transfer at `t`,
/// substituting `x = t/s` so that `dx = abs(t) abs(s)^{-2} ds`.
pub fn symsq_brute_force(
    data: &SymSqTestData,
    kernel: &SymSqKernel,
    psi: &AdditiveCharacter,
    t: &PAdicNumber,
) -> Result<Complex64> {
    let eta = &kernel.eta;
    let q = data.params.q() as f64;
    let vt = t.valuation().ok_or(Error::UnsupportedGerm)?;
    let m = eta.level() as i64;
    let mut acc = Complex64::new(0.0, 0.0);
    for (br, bs, c) in &data.terms {
        let kr = br.valuation().ok_or(Error::NonIntegrable)?;
        let ks = bs.valuation().ok_or(Error::UnsupportedGerm)?;
        let rr = (kr + m + 1).max(br.radius() + 1);
        let mut rsum = Complex64::new(0.0, 0.0);
        for cell in br.subdivide((rr - br.radius()) as u32)? {
            let vol = q.powi((kr - cell.radius()) as i32) / (1.0 - 1.0 / q);
            rsum += eta.eval(cell.center())? * vol;
        }
        let rs = (psi.conductor() + 2 * ks - vt + 1).max(ks + m + 1).max(bs.radius() + 1);
        let mut xsum = Complex64::new(0.0, 0.0);
        for cell in bs.subdivide((rs - bs.radius()) as u32)? {
            let s = cell.center();
            let x = t.div(s)?;
            let jac = t.abs() * s.abs().powi(-2) * cell.volume();
            xsum += eta.eval(&x)? * psi.eval_complex(&x)? * jac;
        }
        acc += c * rsum * xsum;
    }
    Ok(kernel.lambda(psi)? * eta.eval(t)? * acc)
}
