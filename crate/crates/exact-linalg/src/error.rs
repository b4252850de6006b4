use exact_rings::RingError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("ring mismatch")]
    RingMismatch,
    #[error("products are undefined in Z^b/J unless J is an ideal (diagonal HNF)")]
    NotAnIdeal,
    #[error("solver needs at least one ring element to fix the ring context")]
    NoContext,
    #[error(transparent)]
    Ring(#[from] RingError),
}
