//! Harmonic analysis on Q_p for transfer operators between relative trace
//! formulas: Schwartz calculus on balls, transfer kernels and their inverses,
//! a symbolic verifier for the coordinate identities, and unramified spectral
//! data for PGL(2).

pub mod acceptance;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod json;
pub mod jx;
pub mod local_field;
pub mod oracles;
pub mod schwartz;
pub mod spectra;
pub mod transfer;

pub use error::{Error, Result};
