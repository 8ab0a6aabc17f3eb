use thiserror::Error;

/// Every failure a computation in this crate can report.
///
/// The CLI maps these to exit code 1 and reports [`Error::name`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("additive cancellation exhausted the carried precision")]
    PrecisionLoss,
    #[error("division by zero")]
    DivisionByZero,
    #[error("insufficient precision: need {needed} digits, have {available}")]
    InsufficientPrecision { needed: i64, available: i64 },
    #[error("character evaluated at zero")]
    ZeroArgument,
    #[error("support touches 0 in a multiplicative integral")]
    NonIntegrable,
    #[error("refinement needs {needed} cells, budget is {budget}")]
    RefinementOverflow { needed: u128, budget: u128 },
    #[error("support touches 0")]
    SupportAtZero,
    #[error("input is not in the image of the transfer operator (residual {residual:e})")]
    NotInImage { residual: f64 },
    #[error("support touches the excluded germ t = 0")]
    UnsupportedGerm,
    #[error("form degrees differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("unknown identity `{0}`")]
    UnknownIdentity(String),
    #[error("degenerate Satake parameter")]
    DegenerateParameter,
    #[error("L-factor has a pole at s = {0}")]
    PoleAt(String),
    #[error("Satake parameter is not tempered")]
    NonTempered,
    #[error("quadrature residual did not decrease under refinement")]
    QuadratureUnstable,
    #[error("json: {0}")]
    Json(String),
}

impl Error {
    /// Stable identifier used in CLI reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::PrecisionLoss => "PrecisionLoss",
            Error::DivisionByZero => "DivisionByZero",
            Error::InsufficientPrecision { .. } => "InsufficientPrecision",
            Error::ZeroArgument => "ZeroArgument",
            Error::NonIntegrable => "NonIntegrable",
            Error::RefinementOverflow { .. } => "RefinementOverflow",
            Error::SupportAtZero => "SupportAtZero",
            Error::NotInImage { .. } => "NotInImage",
            Error::UnsupportedGerm => "UnsupportedGerm",
            Error::DegreeMismatch(..) => "DegreeMismatch",
            Error::UnknownIdentity(_) => "UnknownIdentity",
            Error::DegenerateParameter => "DegenerateParameter",
            Error::PoleAt(_) => "PoleAt",
            Error::NonTempered => "NonTempered",
            Error::QuadratureUnstable => "QuadratureUnstable",
            Error::Json(_) => "Json",
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
