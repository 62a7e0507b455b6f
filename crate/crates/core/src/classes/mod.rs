//! Class specifications, bounded Fraïssé axiom checks and finite limit
//! approximations.

mod axioms;
mod limit;
mod spec;

pub use axioms::{check_ap, check_hp, check_jep, ApFailure, ApOutcome, AxiomVerdict, HpOutcome, JepFailure, JepOutcome};
pub use limit::{age, audit_extension_property, build_limit_approx, missing_extensions, LimitApprox, Requirement};
pub use spec::{Admissibility, Builtin, ClassMode, ClassSpec};

