use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("characteristic 2 is not supported here")]
    Characteristic2,
    #[error("unsupported splitting: {0}")]
    UnsupportedSplitting(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("not in U: {0}")]
    NotInU(String),
    #[error("transversality: {0}")]
    Transversality(String),
    #[error("boundary: {0}")]
    Boundary(String),
    #[error("not decomposable: Plucker relation evaluates to {0}")]
    NotDecomposable(String),
    #[error("budget exceeded: {needed} candidates requested, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("parse error: {0}")]
    Parse(String),
}

/// Coarse classification used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Malformed,
    Domain,
    Budget,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidInput(_) | Error::FieldMismatch(_) | Error::Parse(_) => {
                ErrorClass::Malformed
            }
            Error::BudgetExceeded { .. } => ErrorClass::Budget,
            _ => ErrorClass::Domain,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
