//! Pseudo-Boolean constraint reasoning.
//!
//! This crate provides:
//!
//! * normalized PB constraints with arbitrary-precision coefficients
//!   ([`constraint`]),
//! * the cutting-planes inference rules ([`rules`]),
//! * exact and incomplete detection of irrelevant literals together with
//!   removal strategies ([`relevance`]),
//! * a small instrumented CDCL-style PB solver with derivation tracing
//!   ([`solver`]),
//! * an OPB reader/writer plus trace and statistics serialization
//!   ([`opb`]).

pub mod assignment;
pub mod constraint;
pub mod literal;
pub mod opb;
pub mod relevance;
pub mod rules;
pub mod solver;

pub use assignment::Assignment;
pub use constraint::{Cube, PbConstraint, RawConstraint, Relation};
pub use literal::{Lit, Var};
