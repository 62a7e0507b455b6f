//! Fully resolved operations. A request is what gets hashed for the cache
//! and echoed as the report's `instance`.

use fraisse_core::classes::{
    audit_extension_property, build_limit_approx, check_ap, check_hp, check_jep, AxiomVerdict, ClassSpec,
};
use fraisse_core::expansions::{locally_invariant_orderings, LinearOrdering};
use fraisse_core::flows::{
    audit_minimality_equivalence, fix_set, is_factor, is_minimal, is_universal_finite, lo_flow, maximal_fixing_extension,
    natural_flow, orbits, point_flow, rel_ea_finite, regular_flow, stabilizer, FiniteFlow, MaximalFix, Perm, PermGroup,
    FINITE_FLOW_NOTE,
};
use fraisse_core::ramsey::{
    audit_wop_implies_op, find_ordering_witness, find_ramsey_witness, realizes_all, verify_ordering_witness,
    verify_ramsey_witness, verify_relative_ramsey_witness, verify_weak_ordering_witness, RELATIVE_RAMSEY_CONVENTION,
};
use fraisse_core::report::{Report, Verdict};
use fraisse_core::structures::Structure;
use fraisse_core::Error;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Axiom {
    Hp,
    Jep,
    Ap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FlowCaps {
    pub element_cap: usize,
    pub subgroup_cap: usize,
    pub point_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FlowSource {
    Lo { n: usize },
    Regular { group: PermGroup },
    Natural { group: PermGroup },
    Point { group: PermGroup },
    Explicit { group: PermGroup, points: usize, generator_actions: Vec<Vec<usize>> },
}

impl FlowSource {
    fn build(&self, caps: &FlowCaps) -> fraisse_core::Result<FiniteFlow> {
        let capped = |g: &PermGroup| g.clone().with_cap(caps.element_cap);
        let flow = match self {
            FlowSource::Lo { n } => lo_flow(*n, caps.point_cap)?,
            FlowSource::Regular { group } => {
                let g = capped(group);
                let order = g.order()?;
                if order > caps.point_cap {
                    return Err(Error::PointCapExceeded(format!(
                        "regular flow has {order} points, cap is {}",
                        caps.point_cap
                    )));
                }
                regular_flow(&g)?
            }
            FlowSource::Natural { group } => natural_flow(&capped(group))?,
            FlowSource::Point { group } => point_flow(&capped(group))?,
            FlowSource::Explicit { group, points, generator_actions } => {
                FiniteFlow::new(capped(group), *points, generator_actions.clone())?
            }
        };
        Ok(flow)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "operation", rename_all = "kebab-case")]
pub enum Request {
    Enumerate { class: ClassSpec, n: usize },
    ClassCheck { axiom: Axiom, class: ClassSpec, n: usize, cap: usize },
    LimitBuild { class: ClassSpec, level: usize, cap: usize },
    RamseyVerify { class: ClassSpec, a: Structure, b: Structure, k: usize, c: Structure, budget: u64 },
    RamseySearch { class: ClassSpec, a: Structure, b: Structure, k: usize, max: usize, budget: u64 },
    OrderingVerify { class: ClassSpec, base: ClassSpec, a: Structure, b: Structure },
    OrderingSearch { class: ClassSpec, base: ClassSpec, a: Structure, max: usize },
    RelativeRamseyVerify { class: ClassSpec, base: ClassSpec, a: Structure, b: Structure, k: usize, c: Structure, budget: u64 },
    WeakOrderingVerify { class: ClassSpec, base: ClassSpec, a: Structure, b: Vec<usize>, level: usize, cap: usize },
    ClaimRealizes { class: ClassSpec, structure: Structure, ordering: LinearOrdering, m: usize },
    AuditWopOp { class: ClassSpec, base: ClassSpec, n: usize, level: usize, cap: usize, max: usize },
    FlowLo { n: usize, caps: FlowCaps },
    FlowOrbits { flow: FlowSource, caps: FlowCaps },
    FlowFix { flow: FlowSource, h: Vec<Perm>, caps: FlowCaps },
    FlowStab { flow: FlowSource, x: usize, caps: FlowCaps },
    FlowMinimal { flow: FlowSource, caps: FlowCaps },
    FlowFactor { flow: FlowSource, onto: FlowSource, caps: FlowCaps },
    FlowUniversal { flow: FlowSource, caps: FlowCaps },
    FlowRelEa { group: PermGroup, h: Vec<Perm>, caps: FlowCaps },
    FlowAuditMinimality { flow: FlowSource, x: usize, caps: FlowCaps },
    FlowMaximalFix { flow: FlowSource, h: Vec<Perm>, caps: FlowCaps },
    InvariantOrderings { structure: Structure },
}

fn axiom_verdict(v: AxiomVerdict) -> Verdict {
    match v {
        AxiomVerdict::Pass => Verdict::True,
        AxiomVerdict::Fail => Verdict::False,
        AxiomVerdict::Inconclusive => Verdict::Inconclusive,
    }
}

const PARTIAL_CARRIER_NOTE: &str =
    "the carrier reached its size cap before closing; fixed orderings are computed on the partial carrier";
const LEVEL_NOTE: &str = "fixed orderings are partial-automorphism invariant orderings of the level carrier; results hold at the stated level only";
const WEAK_READING_NOTE: &str =
    "weak ordering: the designated copy is checked; the audit gates on some copy and also reports the every-copy reading";
const ANALOG_NOTE: &str = "finite analog: the maximality probe echoes the infinite result and does not approximate it";

impl Request {
    pub fn property(&self) -> &'static str {
        match self {
            Request::Enumerate { .. } => "enumerate",
            Request::ClassCheck { axiom: Axiom::Hp, .. } => "hereditary_property",
            Request::ClassCheck { axiom: Axiom::Jep, .. } => "joint_embedding_property",
            Request::ClassCheck { axiom: Axiom::Ap, .. } => "amalgamation_property",
            Request::LimitBuild { .. } => "limit_approximation",
            Request::RamseyVerify { .. } => "ramsey_witness",
            Request::RamseySearch { .. } => "ramsey_witness_search",
            Request::OrderingVerify { .. } => "ordering_witness",
            Request::OrderingSearch { .. } => "ordering_witness_search",
            Request::RelativeRamseyVerify { .. } => "relative_ramsey_witness",
            Request::WeakOrderingVerify { .. } => "weak_ordering_witness",
            Request::ClaimRealizes { .. } => "realizes_all",
            Request::AuditWopOp { .. } => "weak_ordering_implies_ordering",
            Request::FlowLo { .. } => "lo_flow",
            Request::FlowOrbits { .. } => "orbits",
            Request::FlowFix { .. } => "fix_set",
            Request::FlowStab { .. } => "stabilizer",
            Request::FlowMinimal { .. } => "minimal",
            Request::FlowFactor { .. } => "factor",
            Request::FlowUniversal { .. } => "universal",
            Request::FlowRelEa { .. } => "relatively_extremely_amenable",
            Request::FlowAuditMinimality { .. } => "minimality_equivalence",
            Request::FlowMaximalFix { .. } => "maximal_fixing_extension",
            Request::InvariantOrderings { .. } => "locally_invariant_orderings",
        }
    }

    fn caps(&self, r: Report) -> Report {
        let flow = |r: Report, c: &FlowCaps| {
            r.cap("element_cap", c.element_cap as u64)
                .cap("subgroup_cap", c.subgroup_cap as u64)
                .cap("point_cap", c.point_cap as u64)
        };
        match self {
            Request::ClassCheck { cap, .. } | Request::LimitBuild { cap, .. } => r.cap("size_cap", *cap as u64),
            Request::RamseyVerify { budget, .. } | Request::RelativeRamseyVerify { budget, .. } => {
                r.cap("coloring_budget", *budget)
            }
            Request::RamseySearch { max, budget, .. } => r.cap("coloring_budget", *budget).cap("witness_size", *max as u64),
            Request::OrderingSearch { max, .. } => r.cap("witness_size", *max as u64),
            Request::WeakOrderingVerify { cap, .. } => r.cap("size_cap", *cap as u64),
            Request::AuditWopOp { cap, max, .. } => r.cap("size_cap", *cap as u64).cap("witness_size", *max as u64),
            Request::FlowLo { caps, .. }
            | Request::FlowOrbits { caps, .. }
            | Request::FlowFix { caps, .. }
            | Request::FlowStab { caps, .. }
            | Request::FlowMinimal { caps, .. }
            | Request::FlowFactor { caps, .. }
            | Request::FlowUniversal { caps, .. }
            | Request::FlowRelEa { caps, .. }
            | Request::FlowAuditMinimality { caps, .. }
            | Request::FlowMaximalFix { caps, .. } => flow(r, caps),
            _ => r,
        }
    }

    /// Runs the operation. Caps and budgets that stop a computation give an
    /// `INCONCLUSIVE` report; invalid inputs are errors.
    pub fn execute(&self) -> Result<Report, CliError> {
        let report = |v| Report::new(self.property(), serde_json::to_value(self).expect("serializable"), v);
        let out = match self.run(&report) {
            Ok(r) => r,
            Err(Error::CapExceeded { cap, partial }) => {
                report(Verdict::Inconclusive).result(&*partial).note(format!("carrier did not close within {cap} points"))
            }
            Err(
                e @ (Error::ElementCapExceeded(_)
                | Error::SubgroupCapExceeded { .. }
                | Error::PointCapExceeded(_)
                | Error::SearchTooLarge(_)),
            ) => report(Verdict::Inconclusive).note(e.to_string()),
            Err(e @ (Error::AmalgamationFailed(_) | Error::AuditMismatch(_))) => {
                report(Verdict::False).counterexample(e.to_string())
            }
            Err(e) => return Err(e.into()),
        };
        Ok(self.caps(out))
    }

    fn run(&self, report: &dyn Fn(Verdict) -> Report) -> fraisse_core::Result<Report> {
        Ok(match self {
            Request::Enumerate { class, n } => {
                let members = class.members(*n);
                report(Verdict::True).result(json!({ "count": members.len(), "structures": members }))
            }
            Request::ClassCheck { axiom, class, n, cap } => match axiom {
                Axiom::Hp => {
                    let o = check_hp(class, *n);
                    report(axiom_verdict(o.verdict))
                        .counterexample(&o.counterexample)
                        .result(json!({ "members_checked": o.members_checked }))
                }
                Axiom::Jep => {
                    let o = check_jep(class, *n, *cap);
                    report(axiom_verdict(o.verdict)).counterexample(&o.counterexample).result(json!({
                        "pairs_checked": o.pairs_checked,
                        "largest_witness": o.largest_witness,
                    }))
                }
                Axiom::Ap => {
                    let o = check_ap(class, *n, *cap);
                    report(axiom_verdict(o.verdict)).counterexample(&o.counterexample).result(json!({
                        "diagrams_checked": o.diagrams_checked,
                        "largest_witness": o.largest_witness,
                    }))
                }
            },
            Request::LimitBuild { class, level, cap } => {
                let l = build_limit_approx(class, *level, *cap)?;
                let missing = audit_extension_property(class, &l.carrier, *level);
                let verdict = Verdict::from_bool(l.closed && missing.is_none());
                report(verdict).witness(&l).counterexample(&missing)
            }
            Request::RamseyVerify { class, a, b, k, c, budget } => {
                let r = verify_ramsey_witness(class, a, b, *k, c, *budget)?;
                report(r.verdict).counterexample(&r.certificate).budget(r.nodes)
            }
            Request::RamseySearch { class, a, b, k, max, budget } => {
                let s = find_ramsey_witness(class, a, b, *k, *max, *budget)?;
                let r = report(s.verdict).witness(&s.witness).budget(s.nodes);
                let r = r.result(json!({ "refuted": s.refuted, "inconclusive_at": s.inconclusive_at }));
                if s.verdict == Verdict::False {
                    r.counterexample(&s.refuted)
                } else {
                    r
                }
            }
            Request::OrderingVerify { class, base, a, b } => {
                let o = verify_ordering_witness(base, class, a, b)?;
                report(o.verdict).counterexample(&o.counterexample).result(json!({ "pairs_checked": o.pairs_checked }))
            }
            Request::OrderingSearch { class, base, a, max } => {
                let s = find_ordering_witness(base, class, a, *max)?;
                let verdict = Verdict::from_bool(s.witness.is_some());
                report(verdict).witness(&s.witness).result(json!({ "candidates_checked": s.candidates_checked }))
            }
            Request::RelativeRamseyVerify { class, base, a, b, k, c, budget } => {
                let r = verify_relative_ramsey_witness(base, class, a, b, *k, c, *budget)?;
                report(r.verdict).counterexample(&r.certificate).budget(r.nodes).note(RELATIVE_RAMSEY_CONVENTION)
            }
            Request::WeakOrderingVerify { class, base, a, b, level, cap } => {
                let w = verify_weak_ordering_witness(base, class, a, b, *level, *cap)?;
                let mut r = report(w.verdict).counterexample(&w.counterexample).result(json!({
                    "level": level,
                    "fixed_count": w.fixed_count,
                    "carrier_size": w.carrier_size,
                    "carrier_closed": w.carrier_closed,
                }));
                r = r.note(LEVEL_NOTE).note(WEAK_READING_NOTE);
                if !w.carrier_closed {
                    r = r.note(PARTIAL_CARRIER_NOTE);
                }
                r
            }
            Request::ClaimRealizes { class, structure, ordering, m } => {
                let c = realizes_all(class, structure, ordering, *m)?;
                report(c.verdict).counterexample(&c.missing).result(json!({ "members_checked": c.members_checked }))
            }
            Request::AuditWopOp { class, base, n, level, cap, max } => {
                let a = audit_wop_implies_op(base, class, *n, *level, *cap, *max)?;
                let mut r = report(a.verdict).result(&a).note(LEVEL_NOTE).note(WEAK_READING_NOTE);
                if !a.carrier_closed {
                    r = r.note(PARTIAL_CARRIER_NOTE);
                }
                r
            }
            Request::FlowLo { n, caps } => {
                let f = FlowSource::Lo { n: *n }.build(caps)?;
                report(Verdict::True).result(f.dump()).note(FINITE_FLOW_NOTE)
            }
            Request::FlowOrbits { flow, caps } => {
                let f = flow.build(caps)?;
                report(Verdict::True).result(json!({ "orbits": orbits(&f) })).note(FINITE_FLOW_NOTE)
            }
            Request::FlowFix { flow, h, caps } => {
                let f = flow.build(caps)?;
                report(Verdict::True).result(json!({ "fix": fix_set(&f, h)? })).note(FINITE_FLOW_NOTE)
            }
            Request::FlowStab { flow, x, caps } => {
                let f = flow.build(caps)?;
                report(Verdict::True).result(json!({ "stabilizer": stabilizer(&f, *x)? })).note(FINITE_FLOW_NOTE)
            }
            Request::FlowMinimal { flow, caps } => {
                let f = flow.build(caps)?;
                let orbs = orbits(&f);
                let r = report(Verdict::from_bool(is_minimal(&f))).result(json!({ "orbits": orbs }));
                let r = if orbs.len() > 1 { r.counterexample(&orbs[0]) } else { r };
                r.note(FINITE_FLOW_NOTE)
            }
            Request::FlowFactor { flow, onto, caps } => {
                let (x, y) = (flow.build(caps)?, onto.build(caps)?);
                let phi = is_factor(&x, &y)?;
                report(Verdict::from_bool(phi.is_some())).witness(&phi).note(FINITE_FLOW_NOTE)
            }
            Request::FlowUniversal { flow, caps } => {
                let f = flow.build(caps)?;
                let u = is_universal_finite(&f, caps.subgroup_cap)?;
                report(Verdict::from_bool(u.universal))
                    .counterexample(&u.missing)
                    .result(json!({ "classes_checked": u.classes_checked }))
                    .note(FINITE_FLOW_NOTE)
            }
            Request::FlowRelEa { group, h, caps } => {
                let g = group.clone().with_cap(caps.element_cap);
                let c = rel_ea_finite(&g, h, caps.subgroup_cap)?;
                let missing = c.per_class.iter().find(|p| p.fixed_point.is_none());
                report(Verdict::from_bool(c.fixed))
                    .witness(c.regular_fixed_point)
                    .counterexample(missing)
                    .result(&c)
                    .note(FINITE_FLOW_NOTE)
            }
            Request::FlowAuditMinimality { flow, x, caps } => {
                let f = flow.build(caps)?;
                let a = audit_minimality_equivalence(&f, *x, caps.subgroup_cap)?;
                report(Verdict::from_bool(a.pass)).result(&a).note(FINITE_FLOW_NOTE)
            }
            Request::FlowMaximalFix { flow, h, caps } => {
                let f = flow.build(caps)?;
                let m = maximal_fixing_extension(&f, h)?;
                let r = match &m.outcome {
                    MaximalFix::Maximal => report(Verdict::True),
                    MaximalFix::Extendable(g) => report(Verdict::False).counterexample(g),
                };
                r.result(&m).note(FINITE_FLOW_NOTE).note(ANALOG_NOTE)
            }
            Request::InvariantOrderings { structure } => {
                let set = locally_invariant_orderings(structure)?;
                report(Verdict::True).result(&set)
            }
        })
    }
}
