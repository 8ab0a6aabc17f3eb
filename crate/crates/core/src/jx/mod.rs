//! Exact certification of the polynomial and differential-form identities
//! on the regular-centralizer group schemes
//! `J_X = Spec Q[t0, t1, xi]/(t0^2 - xi t1^2 - 1)` and its GL2 lift with
//! coordinates `(z, tau)`.
//!
//! Equalities in the fraction field are decided by cross-multiplying and
//! reducing in the quotient ring; no Groebner machinery is needed because
//! the ideal is generated by monic relations in `t0` and `rho`.

mod form;
mod matrix;
mod poly;
mod suite;

pub use form::{form_from_terms, DiffForm, Frac, FormComparison, BASIS};
pub use matrix::Matrix2;
pub use poly::{rat, Coeff, MPoly, Monomial, QuotElem, Ring, Var, NVARS};
pub use suite::{mutation_controls, verify_all, verify_identity, Certificate, IDENTITIES};

/// Reduces `x` modulo the centralizer relation.
pub fn quot_reduce(x: &MPoly) -> QuotElem {
    Ring::default().reduce(x)
}

/// Compares two forms over the centralizer ring.
pub fn form_equal(a: &DiffForm, b: &DiffForm) -> crate::Result<FormComparison> {
    Ring::default().form_equal(a, b)
}
