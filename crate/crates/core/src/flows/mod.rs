//! Finite permutation groups acting on finite sets.
//!
//! Every subset of a finite discrete flow is closed, so orbit closures are
//! orbits, minimal flows are the transitive ones, and the regular action
//! plays the part of the universal minimal flow.

mod flow;
mod group;
mod ops;

pub use flow::{
    coset_flow, disjoint_union, lo_flow, natural_flow, point_flow, regular_flow, FiniteFlow, FlowDump, DEFAULT_POINT_CAP,
};
pub use group::{subgroups_up_to_conjugacy, Perm, PermGroup, Subgroup, DEFAULT_ELEMENT_CAP, DEFAULT_SUBGROUP_CAP};
pub use ops::{
    audit_minimality_equivalence, fix_set, is_factor, is_minimal, is_universal_finite, maximal_fixing_extension, orbits,
    orbits_under, rel_ea_finite, stabilizer, transitive_wrt, CosetFixCertificate, MaximalFix, MaximalFixCheck,
    MinimalityAudit, RelEaCheck, UniversalityCheck, FINITE_FLOW_NOTE,
};
