//! Schwartz–Bruhat calculus on Q_p: ball decompositions and their Fourier,
//! Mellin and oscillatory transforms.

mod ball;
mod function;
mod oscillatory;
mod rational;
mod transforms;

pub use ball::{Ball, BallRelation, Cell};
pub use function::{Measure, SchwartzFunction, MERGE_TOL};
pub use oscillatory::{
    ball_phase_integral, oscillatory_integral, oscillatory_integral_with_budget, Phase, PhaseIntegral, DEFAULT_BUDGET,
};
pub use rational::{exact, ExactComplex, LaurentPoly, RationalFnT, Scalar};
pub use transforms::{
    fourier_transform, fourier_transform_with_budget, geometric, inverse_fourier_transform, mellin_transform,
    mellin_transform_exact, mellin_transform_with,
};
