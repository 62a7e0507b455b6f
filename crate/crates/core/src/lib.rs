//! Executable finite analogues of Fraïssé theory, structural Ramsey
//! properties and finite group flows.
//!
//! - [`structures`]: relational structures, embeddings, canonical forms.
//! - [`classes`]: class specifications, HP/JEP/AP checks, limit approximations.
//! - [`expansions`]: linear orderings, admissible and locally invariant orderings.
//! - [`ramsey`]: Ramsey, ordering, relative Ramsey and weak ordering checks.
//! - [`flows`]: permutation groups acting on finite sets.
//! - [`report`]: the machine-readable verdict format.

pub mod classes;
pub mod error;
pub mod expansions;
pub mod flows;
pub mod ramsey;
pub mod report;
pub mod structures;

pub use error::{Error, Result};
