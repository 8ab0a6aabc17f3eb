//! Arithmetic in Q_p, its characters and Haar measures.

mod character;
mod padic;
mod units;

pub use character::{AdditiveCharacter, MeasureConvention, MultiplicativeCharacter, RootOfUnity};
pub use padic::{max_digits, FieldParams, PAdicNumber};
pub(crate) use padic::{inv_mod, pow_u128};
pub use units::UnitGroup;
