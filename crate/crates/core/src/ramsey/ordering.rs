use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::witness::require_member;
use crate::classes::{age, ClassSpec};
use crate::error::{Error, Result};
use crate::expansions::{admissible_orderings, fixed_orderings_approx, FixedOrderings, LinearOrdering};
use crate::report::Verdict;
use crate::structures::{canonical_form, embeds, CanonicalForm, Structure};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingCheck {
    pub verdict: Verdict,
    /// The first pair `(ordering of A0, ordering of B0)` with no embedding.
    pub counterexample: Option<(LinearOrdering, LinearOrdering)>,
    pub pairs_checked: usize,
}

/// Checks `(a0, p)` embeds into `(b0, q)` for every listed `p` and `q`, in
/// lexicographic order of the pair. Expanded structures are compared by
/// canonical form so each isomorphism type pair is searched once.
pub fn verify_ordering_with(
    k: &ClassSpec,
    a0: &Structure,
    a_orders: &[LinearOrdering],
    b0: &Structure,
    b_orders: &[LinearOrdering],
) -> Result<OrderingCheck> {
    let sig = k.signature();
    let expand = |s: &Structure, os: &[LinearOrdering]| -> Result<Vec<(CanonicalForm, Structure)>> {
        os.iter()
            .map(|o| {
                let e = o.expand(s, sig)?;
                Ok((canonical_form(&e), e))
            })
            .collect()
    };
    let a_exp = expand(a0, a_orders)?;
    let b_exp = expand(b0, b_orders)?;
    let mut memo: HashMap<(&CanonicalForm, &CanonicalForm), bool> = HashMap::new();
    let mut pairs = 0;
    for (i, (fa, ea)) in a_exp.iter().enumerate() {
        for (j, (fb, eb)) in b_exp.iter().enumerate() {
            pairs += 1;
            let ok = match memo.get(&(fa, fb)) {
                Some(&v) => v,
                None => {
                    let v = embeds(ea, eb)?;
                    memo.insert((fa, fb), v);
                    v
                }
            };
            if !ok {
                return Ok(OrderingCheck {
                    verdict: Verdict::False,
                    counterexample: Some((a_orders[i].clone(), b_orders[j].clone())),
                    pairs_checked: pairs,
                });
            }
        }
    }
    Ok(OrderingCheck { verdict: Verdict::True, counterexample: None, pairs_checked: pairs })
}

/// Whether every admissible ordering of `a0` embeds into every admissible
/// ordering of `b0`.
pub fn verify_ordering_witness(k0: &ClassSpec, k: &ClassSpec, a0: &Structure, b0: &Structure) -> Result<OrderingCheck> {
    k.check_expands(k0)?;
    require_member(k0, a0, "A0")?;
    require_member(k0, b0, "B0")?;
    let pa = admissible_orderings(k, a0)?;
    let pb = admissible_orderings(k, b0)?;
    verify_ordering_with(k, a0, &pa.orderings, b0, &pb.orderings)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingSearch {
    pub witness: Option<Structure>,
    pub candidates_checked: usize,
}

/// The first member `B0` of `k0` with `|B0| <= max` (by size, then
/// canonical order) passing [`verify_ordering_witness`].
pub fn find_ordering_witness(k0: &ClassSpec, k: &ClassSpec, a0: &Structure, max: usize) -> Result<OrderingSearch> {
    k.check_expands(k0)?;
    require_member(k0, a0, "A0")?;
    let pa = admissible_orderings(k, a0)?;
    let mut checked = 0;
    if max < a0.size() {
        return Ok(OrderingSearch { witness: None, candidates_checked: 0 });
    }
    for b0 in k0.members_up_to(max)[a0.size()..].iter().flatten() {
        checked += 1;
        let pb = admissible_orderings(k, b0)?;
        if verify_ordering_with(k, a0, &pa.orderings, b0, &pb.orderings)?.verdict == Verdict::True {
            return Ok(OrderingSearch { witness: Some(b0.clone()), candidates_checked: checked });
        }
    }
    Ok(OrderingSearch { witness: None, candidates_checked: checked })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeakOrderingCheck {
    /// `VacuousTrue` when the fixed set is empty.
    pub verdict: Verdict,
    pub counterexample: Option<(LinearOrdering, LinearOrdering)>,
    pub fixed_count: usize,
    pub carrier_size: usize,
    pub carrier_closed: bool,
}

/// As [`verify_weak_ordering_witness`], against a precomputed fixed set.
pub fn verify_weak_ordering_on(k0: &ClassSpec, k: &ClassSpec, a0: &Structure, b0: &[usize], fixed: &FixedOrderings) -> Result<WeakOrderingCheck> {
    require_member(k0, a0, "A0")?;
    let n = fixed.reduct.size();
    let mut pts = b0.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() != b0.len() {
        return Err(Error::Precondition("B0 repeats a point".into()));
    }
    if let Some(&p) = pts.iter().find(|&&p| p >= n) {
        return Err(Error::PointOutOfRange { point: p, size: n });
    }
    let base = |verdict, counterexample| WeakOrderingCheck {
        verdict,
        counterexample,
        fixed_count: fixed.orderings.len(),
        carrier_size: n,
        carrier_closed: fixed.carrier_closed,
    };
    if fixed.orderings.is_empty() {
        return Ok(base(Verdict::VacuousTrue, None));
    }
    let sub = fixed.reduct.induced_substructure(&pts)?;
    let restricted: Vec<LinearOrdering> = fixed.orderings.orderings.iter().map(|o| o.restrict(&pts)).collect();
    let pa = admissible_orderings(k, a0)?;
    let check = verify_ordering_with(k, a0, &pa.orderings, &sub, &restricted)?;
    let counterexample = check.counterexample.map(|(p, q)| {
        let idx = restricted.iter().position(|r| *r == q).expect("restriction came from this list");
        (p, fixed.orderings.orderings[idx].clone())
    });
    Ok(base(check.verdict, counterexample))
}

/// Whether every admissible ordering of `a0` embeds into the restriction to
/// the carrier points `b0` of every fixed ordering at `level`.
pub fn verify_weak_ordering_witness(
    k0: &ClassSpec,
    k: &ClassSpec,
    a0: &Structure,
    b0: &[usize],
    level: usize,
    cap: usize,
) -> Result<WeakOrderingCheck> {
    let fixed = fixed_orderings_approx(k0, k, level, cap)?;
    verify_weak_ordering_on(k0, k, a0, b0, &fixed)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealizationCheck {
    pub verdict: Verdict,
    pub missing: Option<Structure>,
    pub members_checked: usize,
}

/// Whether every member of `k` with `1..=m` points is isomorphic to a
/// substructure of `f0` ordered by `o`.
pub fn realizes_all(k: &ClassSpec, f0: &Structure, o: &LinearOrdering, m: usize) -> Result<RealizationCheck> {
    let f = o.expand(f0, k.signature())?;
    let present: BTreeSet<CanonicalForm> = age(&f, m).iter().map(canonical_form).collect();
    let levels = k.members_up_to(m);
    let mut checked = 0;
    for a in levels.iter().skip(1).flatten() {
        checked += 1;
        if !present.contains(&canonical_form(a)) {
            return Ok(RealizationCheck { verdict: Verdict::False, missing: Some(a.clone()), members_checked: checked });
        }
    }
    Ok(RealizationCheck { verdict: Verdict::True, missing: None, members_checked: checked })
}

/// Outcome for one `A0` of the implication audit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WopEntry {
    pub a0: Structure,
    /// First carrier subset that is a weak ordering witness.
    pub weak_witness: Option<Vec<usize>>,
    pub weak_verdict: Option<Verdict>,
    /// Whether every carrier subset isomorphic to the witness also works.
    pub every_copy: Option<bool>,
    pub ordering_witness: Option<Structure>,
    /// `True`: ordering witness found. `VacuousTrue`: no weak witness, so
    /// nothing to check. `Inconclusive`: no ordering witness up to the cap.
    pub status: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WopAudit {
    pub verdict: Verdict,
    pub entries: Vec<WopEntry>,
    pub level: usize,
    pub fixed_count: usize,
    pub carrier_size: usize,
    pub carrier_closed: bool,
}

/// For every `A0` in `k0` with `|A0| <= n` that has a weak ordering witness
/// among the carrier subsets of size `<= max`, looks for an ordering
/// witness of size `<= max`.
pub fn audit_wop_implies_op(k0: &ClassSpec, k: &ClassSpec, n: usize, level: usize, cap: usize, max: usize) -> Result<WopAudit> {
    k.check_expands(k0)?;
    let members: Vec<Structure> = k0.members_up_to(n).into_iter().flatten().collect();
    if members.is_empty() {
        return Ok(WopAudit {
            verdict: Verdict::VacuousTrue,
            entries: vec![],
            level,
            fixed_count: 0,
            carrier_size: 0,
            carrier_closed: true,
        });
    }
    let fixed = fixed_orderings_approx(k0, k, level, cap)?;
    let entries: Vec<WopEntry> =
        members.par_iter().map(|a0| audit_one(k0, k, a0, &fixed, max)).collect::<Result<Vec<_>>>()?;
    let verdict = if entries.iter().any(|e| e.status == Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::True
    };
    Ok(WopAudit {
        verdict,
        entries,
        level,
        fixed_count: fixed.orderings.len(),
        carrier_size: fixed.reduct.size(),
        carrier_closed: fixed.carrier_closed,
    })
}

fn audit_one(k0: &ClassSpec, k: &ClassSpec, a0: &Structure, fixed: &FixedOrderings, max: usize) -> Result<WopEntry> {
    let f0 = &fixed.reduct;
    let mut found = None;
    'sizes: for r in a0.size()..=max.min(f0.size()) {
        for subset in (0..f0.size()).combinations(r) {
            let check = verify_weak_ordering_on(k0, k, a0, &subset, fixed)?;
            if check.verdict.holds() {
                found = Some((subset, check.verdict));
                break 'sizes;
            }
        }
    }
    let Some((subset, weak_verdict)) = found else {
        return Ok(WopEntry {
            a0: a0.clone(),
            weak_witness: None,
            weak_verdict: None,
            every_copy: None,
            ordering_witness: None,
            status: Verdict::VacuousTrue,
        });
    };
    let form = canonical_form(&f0.pull(&subset));
    let mut every_copy = true;
    for other in (0..f0.size()).combinations(subset.len()) {
        if canonical_form(&f0.pull(&other)) == form && !verify_weak_ordering_on(k0, k, a0, &other, fixed)?.verdict.holds() {
            every_copy = false;
            break;
        }
    }
    let search = find_ordering_witness(k0, k, a0, max)?;
    let status = if search.witness.is_some() { Verdict::True } else { Verdict::Inconclusive };
    Ok(WopEntry {
        a0: a0.clone(),
        weak_witness: Some(subset),
        weak_verdict: Some(weak_verdict),
        every_copy: Some(every_copy),
        ordering_witness: search.witness,
        status,
    })
}
