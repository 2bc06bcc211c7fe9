use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("objective undefined: {0}")]
    UndefinedObjective(String),
    #[error("infeasible move: {0}")]
    InfeasibleMove(String),
    #[error("enumeration cap exceeded: need {needed}, cap {cap}")]
    CapExceeded { needed: u128, cap: u128 },
    #[error("incompatible reduction path: {0}")]
    IncompatiblePath(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
