use std::time::Instant;

use super::form::{form_from_terms, DiffForm, Frac};
use super::matrix::Matrix2;
use super::poly::{rat, QuotElem, Ring, Var, NVARS};
use crate::error::{Error, Result};

/// Registered identities, in reporting order.
pub const IDENTITIES: [&str; 11] = [
    "centralizer_relation",
    "symplectic_chain_G",
    "gl2_symplectic_form",
    "gl2_omega_wedge",
    "coordinate_map_2dim",
    "c_equals_xy",
    "kuznetsov_coordinate",
    "kostant_factorization_G",
    "kostant_factorization_GL2",
    "eigenvalue_lemma_GL2",
    "galois_twist_involution",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Faithful,
    /// One constant or sign deliberately corrupted; must fail.
    Mutated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub name: String,
    pub pass: bool,
    pub witnesses: Vec<String>,
    pub elapsed_ms: f64,
}

enum Check {
    Zero(&'static str, QuotElem),
    NonZero(&'static str, QuotElem),
}

fn v(x: Var) -> Frac {
    Frac::var(x)
}

fn q(n: i64, d: i64) -> Frac {
    Frac::ratio(n, d)
}

fn zero_form_check(label: &'static str, ring: &Ring, w: &DiffForm) -> Check {
    let first = w.terms().map(|(_, f)| ring.reduce(f.num())).find(|r| !r.is_zero());
    Check::Zero(label, first.unwrap_or_else(|| ring.reduce(&Default::default())))
}

fn forms_equal(label: &'static str, ring: &Ring, a: &DiffForm, b: &DiffForm) -> Check {
    let cmp = ring.form_equal(a, b).expect("same degree");
    Check::Zero(label, cmp.witness.unwrap_or_else(|| ring.reduce(&Default::default())))
}

fn matrices_equal(label: &'static str, ring: &Ring, a: &Matrix2, b: &Matrix2, out: &mut Vec<Check>) {
    for w in a.witnesses(b, ring) {
        out.push(Check::Zero(label, w));
    }
}

fn fracs_equal(label: &'static str, ring: &Ring, a: &Frac, b: &Frac) -> Check {
    Check::Zero(label, a.witness(b, ring))
}

fn omega_g(ring: &Ring) -> DiffForm {
    ring.d_function(&v(Var::T0)).wedge(&ring.d_function(&v(Var::T1).inv()))
}

fn dlog(ring: &Ring, f: &Frac) -> DiffForm {
    ring.d_function(f).scale(&f.inv())
}

fn identity_images() -> [Frac; NVARS] {
    Var::ALL.map(Frac::var)
}

fn centralizer_element() -> Matrix2 {
    let (t0, t1, xi, z, tau) = (v(Var::T0), v(Var::T1), v(Var::Xi), v(Var::Z), v(Var::Tau));
    let a = z.mul(&t0.sub(&tau.mul(&t1)));
    let b = z.mul(&t1).mul(&xi.sub(&tau.mul(&tau))).mul(&q(1, 2));
    let c = q(2, 1).mul(&z).mul(&t1);
    let d = z.mul(&t0.add(&tau.mul(&t1)));
    Matrix2::new(a, b, c, d)
}

fn xy() -> (Frac, Frac) {
    let (t0, t1, z, tau) = (v(Var::T0), v(Var::T1), v(Var::Z), v(Var::Tau));
    (z.inv().mul(&t0.sub(&tau.mul(&t1))), z.mul(&t0.add(&tau.mul(&t1))))
}

fn checks(name: &str, variant: Variant) -> Result<Vec<Check>> {
    let mutated = variant == Variant::Mutated;
    let ring = if mutated && name == "centralizer_relation" { Ring::with_relation_constant(2) } else { Ring::default() };
    let r = &ring;
    let (t0, t1, xi, z, tau, rho) = (v(Var::T0), v(Var::T1), v(Var::Xi), v(Var::Z), v(Var::Tau), v(Var::Rho));
    let gl2 = |dz_weight: Frac| omega_g(r).add(&DiffForm::basis(Var::Z).wedge(&DiffForm::basis(Var::Tau)).scale(&dz_weight));
    let mut out = Vec::new();
    match name {
        "centralizer_relation" => {
            let rel = Ring::default().relation();
            out.push(Check::Zero("t0^2 - xi t1^2 - 1", r.reduce(&rel)));
            out.push(zero_form_check("d(t0^2 - xi t1^2 - 1)", r, &r.d_function(&Frac::poly(rel.clone()))));
            let cube = rel.mul(&rel).add(&rel.mul(&t0.num().clone()));
            out.push(Check::Zero("ideal membership", r.reduce(&cube)));
        }
        "symplectic_chain_G" => {
            let w1 = form_from_terms(2, [(vec![Var::T1, Var::Xi], q(1, 2).div(&t0))]);
            let k = if mutated { 1 } else { 2 };
            let w2 = r.d_function(&t0).wedge(&DiffForm::basis(Var::Xi)).scale(&q(1, k).div(&xi.mul(&t1)));
            out.push(forms_equal("dt1^dxi/(2t0) = dt0^dxi/(2 xi t1)", r, &w1, &w2));
            out.push(forms_equal("dt1^dxi/(2t0) = dt0^d(1/t1)", r, &w1, &omega_g(r)));
            let top = w1.terms().next().map(|(_, f)| r.reduce(f.num())).unwrap_or_else(|| r.reduce(&Default::default()));
            out.push(Check::NonZero("top power of omega", top));
        }
        "gl2_symplectic_form" => {
            let omega = gl2(if mutated { Frac::one() } else { z.inv() });
            out.push(zero_form_check("d omega", r, &r.d(&omega)));
            let top = omega.wedge(&omega).terms().next().map(|(_, f)| r.reduce(f.num()));
            out.push(Check::NonZero("omega^omega", top.unwrap_or_else(|| r.reduce(&Default::default()))));
            let mu2 = [t0.neg(), t1.neg(), xi.clone(), z.neg(), tau.clone(), rho.clone()];
            let moved = Frac::poly(r.relation()).substitute(&mu2);
            out.push(Check::Zero("mu_2 preserves the ideal", r.reduce(moved.num())));
            out.push(forms_equal("mu_2^* omega = omega", r, &r.pullback(&omega, &mu2), &omega));
        }
        "gl2_omega_wedge" => {
            let omega = gl2(z.inv());
            let a = z.mul(&t1);
            let b = t1.mul(&z.inv());
            let (x, y) = xy();
            let vol = dlog(r, &a).wedge(&dlog(r, &b)).wedge(&r.d_function(&x)).wedge(&r.d_function(&y));
            let k = if mutated { 3 } else { 2 };
            let rhs = vol.scale(&q(k, 4).div(&a.mul(&b)));
            out.push(forms_equal("omega^omega = 2 (4ab)^-1 dxa^dxb^dx^dy", r, &omega.wedge(&omega), &rhs));
        }
        "coordinate_map_2dim" => {
            let k = if mutated { 2 } else { 4 };
            let section = Matrix2::new(Frac::zero(), xi.sub(&tau.mul(&tau)).mul(&q(1, k)), Frac::one(), tau.clone());
            let e = centralizer_element();
            let zero = Matrix2::scalar(Frac::zero());
            matrices_equal("centralizes the section", r, &e.commutator(&section), &zero, &mut out);
            let (x, y) = xy();
            out.push(fracs_equal("x = A det^-1", r, &e.e[0][0].div(&e.det()), &x));
            out.push(fracs_equal("y = D", r, &e.e[1][1], &y));
        }
        "c_equals_xy" => {
            let (x, y) = xy();
            let sign = if mutated { 1 } else { -1 };
            let c = xi.add(&tau.mul(&tau).scale(rat(sign, 1))).mul(&t1.mul(&t1)).add(&Frac::one());
            out.push(fracs_equal("xy = (xi - tau^2) t1^2 + 1", r, &x.mul(&y), &c));
            let prod = t0.sub(&tau.mul(&t1)).mul(&t0.add(&tau.mul(&t1)));
            out.push(fracs_equal("(t0 - tau t1)(t0 + tau t1)", r, &prod, &c));
        }
        "kuznetsov_coordinate" => {
            let m = Matrix2::new(rho.mul(&q(1, 2)), Frac::zero(), Frac::one(), rho.mul(&q(-1, 2)));
            let lower = if mutated { t1.clone() } else { q(2, 1).mul(&t1) };
            let k = Matrix2::new(t0.add(&rho.mul(&t1)), Frac::zero(), lower, t0.sub(&rho.mul(&t1)));
            matrices_equal("centralizes the Kostant point", r, &k.commutator(&m), &Matrix2::scalar(Frac::zero()), &mut out);
            out.push(fracs_equal("det = 1", r, &k.det(), &Frac::one()));
            out.push(fracs_equal("lower-left coordinate = 2 t1", r, &k.e[1][0], &q(2, 1).mul(&t1)));
        }
        "kostant_factorization_G" => {
            let k = if mutated { 2 } else { 4 };
            let two_t1 = q(2, 1).mul(&t1);
            let lhs = Matrix2::new(t0.clone(), xi.mul(&q(1, k)).mul(&two_t1), two_t1.clone(), t0.clone());
            let u = Matrix2::upper(t0.div(&two_t1));
            let rhs = u.mul(&Matrix2::antidiag(two_t1.inv().neg(), two_t1.clone())).mul(&u);
            matrices_equal("factorization", r, &lhs, &rhs, &mut out);
            let section = Matrix2::antidiag(xi.mul(&q(1, 4)), Frac::one());
            matrices_equal("centralizes the section", r, &lhs.commutator(&section), &Matrix2::scalar(Frac::zero()), &mut out);
            out.push(fracs_equal("det = 1", r, &lhs.det(), &Frac::one()));
        }
        "kostant_factorization_GL2" => {
            let two_t1 = q(2, 1).mul(&t1);
            let lhs = Matrix2::scalar(z.clone()).mul(&Matrix2::new(
                t0.clone(),
                xi.mul(&q(1, 4)).mul(&two_t1),
                two_t1.clone(),
                t0.clone(),
            ));
            let u = Matrix2::upper(t0.div(&two_t1));
            let mid = Matrix2::antidiag(z.div(&two_t1).neg(), z.mul(&two_t1));
            matrices_equal("factorization in t1, z", r, &lhs, &u.mul(&mid).mul(&u), &mut out);
            let a = z.mul(&t1);
            let b = t1.div(&z);
            let (x, y) = xy();
            let sign = if mutated { -1 } else { 1 };
            let w = a.inv().mul(&y).add(&b.inv().mul(&x).scale(rat(sign, 1))).mul(&q(1, 4));
            let ab = Matrix2::upper(w.clone())
                .mul(&Matrix2::antidiag(q(2, 1).mul(&b).inv().neg(), q(2, 1).mul(&a)))
                .mul(&Matrix2::upper(w));
            matrices_equal("factorization in a, b, x, y", r, &lhs, &ab, &mut out);
            let section = Matrix2::new(tau.mul(&q(1, 2)), xi.mul(&q(1, 4)), Frac::one(), tau.mul(&q(1, 2)));
            matrices_equal("centralizes the section", r, &lhs.commutator(&section), &Matrix2::scalar(Frac::zero()), &mut out);
        }
        "eigenvalue_lemma_GL2" => {
            let e = centralizer_element();
            let l1 = z.mul(&t0.add(&rho.mul(&t1)));
            let zz = if mutated { z.inv() } else { z.clone() };
            let l2 = zz.mul(&t0.sub(&rho.mul(&t1)));
            out.push(fracs_equal("trace = sum of eigenvalues", r, &e.trace(), &l1.add(&l2)));
            out.push(fracs_equal("det = product of eigenvalues", r, &e.det(), &l1.mul(&l2)));
        }
        "galois_twist_involution" => {
            let tau_image = if mutated { tau.clone() } else { tau.neg() };
            let sigma = [t0.clone(), t1.clone(), xi.clone(), z.inv(), tau_image, rho.clone()];
            let moved = Frac::poly(r.relation()).substitute(&sigma);
            out.push(Check::Zero("sigma preserves the ideal", r.reduce(moved.num())));
            let omega = gl2(z.inv());
            out.push(forms_equal("sigma^* omega = omega", r, &r.pullback(&omega, &sigma), &omega));
            for (x, image) in identity_images().iter().zip(&sigma) {
                out.push(fracs_equal("sigma^2 = id", r, &image.substitute(&sigma), x));
            }
        }
        other => return Err(Error::UnknownIdentity(other.to_string())),
    }
    Ok(out)
}

fn certify(name: &str, variant: Variant) -> Result<Certificate> {
    let start = Instant::now();
    let checks = checks(name, variant)?;
    let mut witnesses = Vec::new();
    for c in &checks {
        match c {
            Check::Zero(label, w) if !w.is_zero() => witnesses.push(format!("{label}: {w}")),
            Check::NonZero(label, w) if w.is_zero() => witnesses.push(format!("{label}: vanishes")),
            _ => {}
        }
    }
    Ok(Certificate {
        name: name.to_string(),
        pass: witnesses.is_empty(),
        witnesses,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

pub fn verify_identity(name: &str) -> Result<Certificate> {
    certify(name, Variant::Faithful)
}

pub fn verify_all() -> Vec<Certificate> {
    IDENTITIES.iter().map(|n| certify(n, Variant::Faithful).unwrap()).collect()
}

/// Every identity with one deliberate corruption; each should fail.
pub fn mutation_controls() -> Vec<Certificate> {
    IDENTITIES.iter().map(|n| certify(n, Variant::Mutated).unwrap()).collect()
}
