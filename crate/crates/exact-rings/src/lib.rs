//! Exact arithmetic for the rings the relax-and-round pipelines work in:
//! rationals, `Z[√q]` and its fraction field, `Z/MZ`, and lattice quotients
//! `Z^b/J`.
//!
//! Nothing here touches floating point. Orderings in `Z[√q]` are decided by
//! sign analysis and squaring; cross-ring sums (needed when a partition cell
//! mixes coordinates from different quadratic rings) go through
//! [`multiquad::MultiQuad`].

pub mod error;
pub mod hnf;
pub mod lattice;
pub mod modint;
pub mod multiquad;
pub mod quad;
pub mod rational;
pub mod scalar;
pub mod sum;

pub use error::RingError;
pub use hnf::{column_hnf, ColumnHnf};
pub use lattice::{intersect_ideals, LatticeIdeal, LatticeQuotientElem};
pub use modint::ModInt;
pub use multiquad::MultiQuad;
pub use quad::{dense_element, quad_compare, quad_floor, DenseElement, QuadElem, QuadRat, QuadRing};
pub use rational::{parse_rational, rat, Rational};
pub use scalar::{Field, OrderedField, Scalar};
pub use sum::balanced_sum;

/// Arbitrary-precision integer used throughout.
pub type Int = num_bigint::BigInt;
/// Dense row-major integer matrix.
pub type IntMatrix = Vec<Vec<Int>>;
