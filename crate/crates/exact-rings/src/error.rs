use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("ring mismatch")]
    RingMismatch,
    #[error("empty interval")]
    EmptyInterval,
    #[error("infinite quotient")]
    InfiniteQuotient,
    #[error("radicand {0} must be a non-square integer in [2, 2^63)")]
    BadRadicand(u64),
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("division by zero")]
    DivisionByZero,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("cannot parse {0:?}")]
    Parse(String),
}
