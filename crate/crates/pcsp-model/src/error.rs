use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown {domain} label {label}")]
    UnknownLabel { domain: char, label: String },
    #[error("duplicate {domain} label {label}")]
    DuplicateLabel { domain: char, label: String },
    #[error("phi lists {got} images for {expected} domain labels")]
    PhiLength { expected: usize, got: usize },
    #[error("relation {relation}: tuple of length {got}, arity is {arity}")]
    TupleLength { relation: String, arity: usize, got: usize },
    #[error("relation {0}: duplicate tuple")]
    DuplicateTuple(String),
    #[error("arity must be positive")]
    ZeroArity,
    #[error("phi(P) is not contained in Q for constraint {0}")]
    NotPromise(String),
    #[error("duplicate constraint name {0}")]
    DuplicateConstraint(String),
    #[error("unknown constraint {0}")]
    UnknownConstraint(String),
    #[error("clause {clause}: {got} variables for a constraint of arity {arity}")]
    ClauseArity { clause: usize, arity: usize, got: usize },
    #[error("variable {var} out of range 1..={n}")]
    VariableRange { var: usize, n: usize },
    #[error("assignment has {got} values, instance has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("value {value} outside the {side} domain")]
    ValueRange { side: char, value: usize },
    #[error("arity too large for brute force")]
    ArityTooLarge,
    #[error("blocks do not partition 0..{0}")]
    InvalidBlocks(usize),
    #[error("function table does not match the blocks or the domain")]
    TableShape,
    #[error("relation {0} is empty")]
    EmptyRelation(String),
    #[error("need at least {needed} variables, got {n}")]
    TooFewVariables { needed: usize, n: usize },
    #[error("planting failed")]
    PlantingFailed,
    #[error("encoding map covers {got} domain values, expected {expected}")]
    EncodingLength { expected: usize, got: usize },
}
