use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime in 2..=97")]
    InvalidPrime(u32),
    #[error("not a p-th power")]
    NotAPthPower,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("denominator vanishes at the origin")]
    PoleAtOrigin,
}
