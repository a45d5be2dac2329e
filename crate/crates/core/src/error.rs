use thiserror::Error;

/// Errors raised by the exact algebra and the solvers built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    #[error("matrices J{0} and J{1} do not commute")]
    NonCommuting(usize, usize),

    #[error("target basis vectors are linearly dependent")]
    DependentBasis,

    #[error("coordinate index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err(what: impl Into<String>) -> Error {
    Error::Dimension(what.into())
}
