//! Exact linear algebra over the rings in `exact-rings`.
//!
//! Equation solvers: fields (Gauss–Jordan), `Z` (Hermite normal form),
//! `Z[√q]` (split into a doubled integer system), `Z/MZ` (sparse unit-pivot
//! elimination with a diagonalisation fallback) and `Z^b/J`. Polyhedral
//! helpers: a generic exact simplex, affine hulls with a relative-interior
//! point, integer orthogonal bases and facet enumeration for small hulls.

pub mod affine;
pub mod error;
pub mod field;
pub mod hull;
pub mod integer;
pub mod lattice;
pub mod modular;
pub mod orthogonal;
pub mod quadratic;
pub mod simplex;
pub mod system;

pub use affine::{affine_hull_and_interior, AffineHull, AffineHullResult};
pub use error::LinalgError;
pub use field::{nullspace, rank, solve_field_system, FieldSolution};
pub use hull::convex_hull_facets;
pub use integer::{hermite_normal_form, solve_integer_system};
pub use lattice::{solve_lattice_module_system, solve_lattice_quotient_by_lifting, solve_lattice_quotient_system};
pub use modular::solve_mod_system;
pub use orthogonal::integer_orthogonal_basis;
pub use quadratic::{doubled_integer_system, solve_quadratic_int_system};
pub use simplex::{maximize, LpOutcome};
pub use system::{InequalitySystem, LinearSystem, VarDomain};

use exact_rings::{LatticeQuotientElem, ModInt, QuadElem, QuadRat, Rational};
use num_bigint::BigInt;

pub type RationalSystem = LinearSystem<Rational>;
pub type IntegerSystem = LinearSystem<BigInt>;
pub type QuadSystem = LinearSystem<QuadElem>;
pub type QuadRatSystem = LinearSystem<QuadRat>;
pub type ModSystem = LinearSystem<ModInt>;
pub type LatticeSystem = LinearSystem<LatticeQuotientElem>;
