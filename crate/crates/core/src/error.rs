use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The quadratic form is not positive definite, so the Gaussian does not integrate.
    #[error("quadratic form is not positive definite")]
    NotIntegrable,

    #[error("quadratic form is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    /// A quadrature marginal came out significantly negative.
    #[error("marginal density is negative ({min:e}) at a grid point")]
    MarginalNegativity { min: f64 },

    #[error("marginal mass {mass} outside the truncation budget")]
    MassLoss { mass: f64 },

    #[error("entropy grid needs {points} points, above the limit of {limit}")]
    GridTooLarge { points: u64, limit: u64 },

    #[error("invalid axes: {0}")]
    InvalidAxes(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short variant name, used by the CLI when reporting numeric failures.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotIntegrable => "NotIntegrable",
            Error::NotSymmetric(_) => "NotSymmetric",
            Error::DegenerateState(_) => "DegenerateState",
            Error::MarginalNegativity { .. } => "MarginalNegativity",
            Error::MassLoss { .. } => "MassLoss",
            Error::GridTooLarge { .. } => "GridTooLarge",
            Error::InvalidAxes(_) => "InvalidAxes",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::Parse(_) => "Parse",
        }
    }
}
