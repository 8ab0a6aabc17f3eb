//! Rank-one transfer operators between Kuznetsov test data (functions of
//! `t1` supported away from 0) and test data on the base (`t0` or `c`).
//!
//! Coordinates:
//!
//! | operator | kernel |
//! |---|---|
//! | type G | `f(t0) = int Phi(t1) psi(t0/t1) abs(t1)^{(d-3)/2} dt1` |
//! | type T | `f(c) = abs(c)^{e1} int int Phi(c/(4uv)) abs(u)^{-e1} abs(v)^{-e2} psi(u+v) d^x u d^x v` |
//! | sym-square | `g(t) = lambda int int f(r, t/x) eta(x r t) psi(x) dx d^x r` |
//!
//! with `e1 = (d+d')/4 - 1` and `e2 = (d-d')/4`.

mod sym_square;
mod type_g;
mod type_t;

use num_complex::Complex64;

pub use sym_square::{default_lambda, transfer_sym_square, SymSqKernel, SymSqTestData};
pub use type_g::{inverse_transfer_g, transfer_g};
pub use type_t::{inverse_transfer_t, transfer_t};

use crate::error::{Error, Result};
use crate::schwartz::SchwartzFunction;

/// Round-trip residual above which an input is reported as outside the image.
pub const IMAGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferKernelG {
    d: u32,
}

impl TransferKernelG {
    pub fn new(d: u32) -> Result<Self> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!("type G needs odd d >= 3, got {d}")));
        }
        Ok(TransferKernelG { d })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Exponent of `abs(t1)` in the kernel.
    pub fn weight_exponent(&self) -> f64 {
        (self.d as f64 - 3.0) / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransferKernelT {
    d: u32,
    d_prime: u32,
}

impl TransferKernelT {
    pub fn new(d: u32, d_prime: u32) -> Result<Self> {
        if d < 2 || d_prime < 2 {
            return Err(Error::InvalidParameter(format!("type T needs d, d' >= 2, got ({d}, {d_prime})")));
        }
        Ok(TransferKernelT { d, d_prime })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn d_prime(&self) -> u32 {
        self.d_prime
    }

    pub fn e1(&self) -> f64 {
        (self.d + self.d_prime) as f64 / 4.0 - 1.0
    }

    pub fn e2(&self) -> f64 {
        (self.d as f64 - self.d_prime as f64) / 4.0
    }
}

/// A function on the base. Type-T and sym-square outputs are only
/// represented on the valuation window `[lo, hi]`: they vanish below it
/// and carry a germ at 0 above it.
#[derive(Debug, Clone, PartialEq)]
pub struct XTestData {
    pub f: SchwartzFunction,
    pub window: Option<(i64, i64)>,
}

impl XTestData {
    pub fn compact(f: SchwartzFunction) -> Self {
        XTestData { f, window: None }
    }
}

fn check_kuznetsov(phi: &SchwartzFunction) -> Result<SchwartzFunction> {
    let phi = phi.try_normalize()?;
    if !phi.avoids_zero() {
        return Err(Error::SupportAtZero);
    }
    Ok(phi)
}

/// Valuation and relative depth of every ball of a function supported in F^x.
fn ball_shape(phi: &SchwartzFunction) -> Vec<(i64, u32)> {
    phi.terms().iter().map(|(b, _)| (b.valuation().unwrap(), b.unit_class().unwrap().1)).collect()
}

fn relative_residual(got: &SchwartzFunction, want: &SchwartzFunction) -> f64 {
    let scale = want.terms().iter().map(|(_, c)| c.norm()).fold(0.0, f64::max).max(1.0);
    got.sup_distance(want) / scale
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}
