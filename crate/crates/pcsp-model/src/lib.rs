//! Promise CSP data model: promise domains, templates, instances and
//! assignments; a brute-force polymorphism checker for block-symmetric
//! functions; a planted-instance generator; and builders for the Basic LP
//! and affine relaxations.
//!
//! Domain values are dense indices into the template's label tables.
//! External documents (JSON) use the labels themselves.

pub mod error;
pub mod instance;
pub mod plant;
pub mod polymorphism;
pub mod relax;
pub mod template;

pub use error::ModelError;
pub use instance::{verify_assignment, Assignment, AssignmentDoc, Clause, ClauseDoc, Instance, InstanceDoc, Side, Verdict};
pub use plant::plant_satisfiable_instance;
pub use polymorphism::{check_polymorphism, round_robin_blocks, BlockFunction, PolymorphismVerdict, BRUTE_FORCE_LIMIT};
pub use relax::{build_affine_relaxation, build_basic_lp, build_basic_lp_facets, AffineRelaxation, BasicLp, DEFAULT_FACET_BUDGET};
pub use template::{Constraint, Label, PromiseDomain, PromiseTemplate, Relation, TemplateDoc};

/// Index of a label in its domain table.
pub type Value = usize;
