//! Polymorphism families, their rounding maps, and the relax-and-round
//! pipelines that solve promise CSPs with them.
//!
//! A [`Family`] describes an infinite sequence of block-symmetric
//! polymorphisms `f_L`. [`solve`] turns a family into an algorithm: it
//! solves the Basic LP over a ring like `Z[√2]` and/or an affine relaxation
//! over `Z/M` or `Z^b/J`, then rounds each variable through the family's
//! `h`. [`weights`] rebuilds, for a solved clause, the stack of tuples
//! whose column-wise image under `f_L` equals the rounded values — the
//! reason the pipeline is correct, run as a check.

pub mod arity;
pub mod error;
pub mod family;
pub mod partition;
pub mod round;
pub mod solve;
pub mod weights;

pub use arity::Arities;
pub use error::PipelineError;
pub use family::{
    block_sizes, Family, FamilyDoc, MapDoc, PeriodicFamily, PeriodicMap, RegPerFamily, RingDoc, SimplexFamily, ThrPerFamily,
    ThresholdFamily,
};
pub use partition::{Cell, CellDoc, IneqDoc, Inequality, PartitionSpec, Polynomial, Rel, TermDoc};
pub use round::{evaluate_partition, round_periodic, round_regper, round_simplex, round_threshold, round_thrper};
pub use solve::{affine_relaxation, basic_lp, lp_embedding, solve, AffineStage, AffineSystem, LpStage, Outcome, Rejection, Solution};
pub use weights::{construct_block_weights, construct_weights, convex_decomposition, sandwich_arity, sandwich_clause, weighted_apply_oracle, ClauseSandwich};
