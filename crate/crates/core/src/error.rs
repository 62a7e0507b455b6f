use thiserror::Error;

use crate::classes::LimitApprox;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("point {point} is outside a universe of size {size}")]
    PointOutOfRange { point: usize, size: usize },

    #[error("unknown builtin class `{0}`")]
    UnknownBuiltin(String),

    #[error("unknown admissibility predicate `{0}`")]
    UnknownPredicate(String),

    #[error("not an order expansion: {0}")]
    NotAnOrderExpansion(String),

    #[error("{0} is not a member of its class")]
    NotAMember(&'static str),

    #[error("limit approximation did not close within a cap of {cap} points")]
    CapExceeded { cap: usize, partial: Box<LimitApprox> },

    #[error("amalgamation failed while extending the carrier: {0}")]
    AmalgamationFailed(String),

    #[error("group closure exceeded the element cap of {0}")]
    ElementCapExceeded(usize),

    #[error("group of order {order} exceeds the subgroup-enumeration cap of {cap}")]
    SubgroupCapExceeded { order: usize, cap: usize },

    #[error("too many points: {0}")]
    PointCapExceeded(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("element is not in the group: {0:?}")]
    NotInGroup(Vec<usize>),

    #[error("flow action is not a group action: {0}")]
    InvalidAction(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("audit mismatch: {0}")]
    AuditMismatch(String),

    #[error("search space too large: {0}")]
    SearchTooLarge(String),
}
