//! Exact LP feasibility over `Q`, and feasible points whose coordinates lie
//! in `Z[√q]`.
//!
//! [`ring_feasible_point`] walks from a ring point on the affine hull towards
//! a rational relative-interior point along an integer orthogonal basis,
//! rounding each coefficient to a nearby element of `Z[√q]`; the rounding
//! radius is small enough that no facet is crossed.

mod rational;
mod ring;

pub use rational::{lp_feasible_rational, lp_maximize_rational};
pub use ring::{ring_feasible_point, ring_maximize, satisfies_exactly, Reject, RingFeasiblePoint, RingMaximum, Transcript};

pub use exact_linalg::{InequalitySystem, LpOutcome};
