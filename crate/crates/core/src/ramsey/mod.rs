//! Ramsey, ordering, relative Ramsey and weak ordering checks at finite
//! scale, plus the realization test and the weak-ordering implication audit.

mod coloring;
mod ordering;
mod relative;
mod witness;

pub use coloring::{ColoringOutcome, PatternFamily, DEFAULT_BUDGET};
pub use ordering::{
    audit_wop_implies_op, find_ordering_witness, realizes_all, verify_ordering_with, verify_ordering_witness,
    verify_weak_ordering_on, verify_weak_ordering_witness, OrderingCheck, OrderingSearch, RealizationCheck,
    WeakOrderingCheck, WopAudit, WopEntry,
};
pub use relative::{relative_family, replay_relative_certificate, verify_relative_ramsey_witness, RELATIVE_RAMSEY_CONVENTION};
pub use witness::{
    find_ramsey_witness, ramsey_family, replay_ramsey_certificate, verify_ramsey_witness, ColoringCertificate, RamseyCheck,
    RamseySearch, Refutation,
};
