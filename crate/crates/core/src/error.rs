use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("memory budget of {budget} elements exceeded")]
    BudgetExceeded { budget: usize },

    #[error("quadrature did not converge within {evaluations} evaluations (estimated error {abs_error:e})")]
    NonConvergence { evaluations: usize, abs_error: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
