use exact_linalg::LinalgError;
use exact_rings::RingError;
use pcsp_model::ModelError;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PipelineError {
    #[error("thresholds must run strictly upwards from 0 to 1")]
    Thresholds,
    #[error("interior threshold {0} lies in the ring")]
    ThresholdInRing(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("label {0} outside E")]
    LabelRange(usize),
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("residue {residue} is not attained by any valid arity")]
    Residue { residue: String },
    #[error("no valid arities")]
    NoArities,
    #[error("partition label {0} has no periodic map")]
    MissingMap(usize),
    #[error("map for label {label}: {got} values for a quotient of order {expected}")]
    MapSize { label: usize, expected: usize, got: usize },
    #[error("cells overlap")]
    CellsOverlap,
    #[error("point on removed boundary")]
    RemovedBoundary,
    #[error("partition undefined at arity {0}")]
    PartitionUndefined(usize),
    #[error("coordinates must sum to 1")]
    NotOnSimplex,
    #[error("no cell contains {0}")]
    Uncovered(String),
    #[error("point has {got} coordinates, partition has dimension {expected}")]
    PointDimension { expected: usize, got: usize },
    #[error("exponent vector of length {got} in a partition of dimension {expected}")]
    ExponentLength { expected: usize, got: usize },
    #[error("bad corner key {0:?}")]
    CornerKey(String),
    #[error("residue must lie in the subring generated by (1, …, 1)")]
    ResidueNotInOnes,
    #[error("family needs a domain of size {expected}, template has {got}")]
    DomainSize { expected: usize, got: usize },
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("L too small")]
    LTooSmall,
    #[error("weights must be convex")]
    NotConvex,
    #[error("{0} residues for {1} weights")]
    WeightShape(usize, usize),
    #[error("point is not in the convex hull of the clause")]
    NotInHull,
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
