//! Finite approximations of Fraïssé limits by iterated one-point amalgamation.

use std::ops::ControlFlow;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use super::ClassSpec;
use crate::error::{Error, Result};
use crate::structures::{canonical_form, canonical_representative, for_each_extension, Structure};

/// A member of `class` with the `level`-extension property, or the partial
/// carrier of a run that hit its cap (`closed == false`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitApprox {
    pub class: ClassSpec,
    pub level: usize,
    pub carrier: Structure,
    pub closed: bool,
    /// Amalgamation rounds that were run.
    pub rounds: usize,
}

/// One extension requirement: the points `subset` of the carrier, in
/// increasing order, together with a one-point extension `extension` of the
/// induced substructure (the new point is the last one).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Requirement {
    pub subset: Vec<usize>,
    pub extension: Structure,
}

/// One-point extensions of `a` inside `k`, as labeled structures with the
/// new point last, in slot order.
pub(crate) fn one_point_extensions(k: &ClassSpec, a: &Structure) -> Vec<Structure> {
    let mut out = Vec::new();
    for_each_extension(a, &k.domain(), |_| true, |s| {
        if k.contains(&s) {
            out.push(s);
        }
        ControlFlow::Continue(())
    });
    out
}

fn realized(f: &Structure, subset: &[usize], ext: &Structure) -> bool {
    let mut pts = subset.to_vec();
    pts.push(0);
    (0..f.size()).filter(|x| !subset.contains(x)).any(|x| {
        *pts.last_mut().unwrap() = x;
        f.pull(&pts) == *ext
    })
}

/// Every unrealized requirement of the `level`-extension property, in
/// (subset size, subset, extension) order.
pub fn missing_extensions(k: &ClassSpec, f: &Structure, level: usize) -> Vec<Requirement> {
    let mut cache: Vec<(Structure, Vec<Structure>)> = Vec::new();
    let mut out = Vec::new();
    for r in 0..level.min(f.size() + 1) {
        for subset in (0..f.size()).combinations(r) {
            let a = f.pull(&subset);
            let exts = match cache.iter().find(|(b, _)| *b == a) {
                Some((_, e)) => e.clone(),
                None => {
                    let e = one_point_extensions(k, &a);
                    cache.push((a, e.clone()));
                    e
                }
            };
            for ext in exts {
                if !realized(f, &subset, &ext) {
                    out.push(Requirement { subset: subset.clone(), extension: ext });
                }
            }
        }
    }
    out
}

/// Adds one point realizing `req`. Tuples that involve the new point and
/// anything outside the subset take the first completion keeping the
/// structure in the class: false before true, lowest order position first.
fn realize(k: &ClassSpec, f: &Structure, req: &Requirement) -> Result<Structure> {
    let new = f.size();
    let mut local = vec![usize::MAX; new + 1];
    for (i, &p) in req.subset.iter().enumerate() {
        local[p] = i;
    }
    local[new] = req.subset.len();
    let mut found = None;
    for_each_extension(
        f,
        &k.domain(),
        |a| {
            if a.tuple.iter().any(|&p| local[p] == usize::MAX) {
                return true;
            }
            let mapped: Vec<usize> = a.tuple.iter().map(|&p| local[p]).collect();
            req.extension.holds(a.sym, &mapped) == a.value
        },
        |s| {
            if k.contains(&s) {
                found = Some(s);
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        },
    );
    found.ok_or_else(|| {
        Error::AmalgamationFailed(format!("no member extends the carrier over points {:?}", req.subset))
    })
}

/// Grows a carrier from the empty structure. Each round collects the
/// requirements missing at its start and realizes those still missing, one
/// new point each, in order. Stops when a round starts with nothing missing
/// (closed) or when a new point would exceed `cap`.
pub fn build_limit_approx(k: &ClassSpec, level: usize, cap: usize) -> Result<LimitApprox> {
    if level == 0 {
        return Err(Error::Precondition("level must be positive".into()));
    }
    let mut f = Structure::blank(k.signature().clone(), 0);
    let mut rounds = 0;
    loop {
        let missing = missing_extensions(k, &f, level);
        if missing.is_empty() {
            return Ok(LimitApprox { class: k.clone(), level, carrier: f, closed: true, rounds });
        }
        rounds += 1;
        for req in &missing {
            if realized(&f, &req.subset, &req.extension) {
                continue;
            }
            if f.size() >= cap {
                let partial = LimitApprox { class: k.clone(), level, carrier: f, closed: false, rounds };
                return Err(Error::CapExceeded { cap, partial: Box::new(partial) });
            }
            f = realize(k, &f, req)?;
        }
    }
}

/// First requirement of the extension property that `f` misses.
pub fn audit_extension_property(k: &ClassSpec, f: &Structure, level: usize) -> Option<Requirement> {
    missing_extensions(k, f, level).into_iter().next()
}

/// Canonical representatives of the induced substructures of `f` with
/// `1..=n` points, ordered by size and then canonical form.
pub fn age(f: &Structure, n: usize) -> Vec<Structure> {
    let mut out = Vec::new();
    for r in 1..=n.min(f.size()) {
        let mut level: Vec<_> = (0..f.size())
            .combinations(r)
            .map(|s| {
                let sub = f.pull(&s);
                (canonical_form(&sub), sub)
            })
            .collect();
        level.sort_by(|a, b| a.0.cmp(&b.0));
        level.dedup_by(|a, b| a.0 == b.0);
        out.extend(level.into_iter().map(|(_, s)| canonical_representative(&s)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::Builtin;
    use crate::structures::builders::*;

    #[test]
    fn pure_sets_level_three() {
        let k = ClassSpec::builtin(Builtin::PureSets);
        let l = build_limit_approx(&k, 3, 10).unwrap();
        assert!(l.closed);
        assert!(l.carrier.size() >= 3);
    }

    #[test]
    fn graphs_level_two() {
        let k = ClassSpec::builtin(Builtin::Graphs);
        let l = build_limit_approx(&k, 2, 12).unwrap();
        let f = &l.carrier;
        assert!(k.member(f).unwrap());
        for v in 0..f.size() {
            assert!((0..f.size()).any(|w| w != v && f.holds(0, &[v, w])));
            assert!((0..f.size()).any(|w| w != v && !f.holds(0, &[v, w])));
        }
        assert!(audit_extension_property(&k, f, 2).is_none());
    }

    #[test]
    fn linear_orders_never_close() {
        let k = ClassSpec::builtin(Builtin::LinearOrders);
        match build_limit_approx(&k, 2, 10) {
            Err(Error::CapExceeded { cap: 10, partial }) => {
                assert!(!partial.closed);
                assert_eq!(partial.carrier.size(), 10);
                assert!(k.member(&partial.carrier).unwrap());
            }
            other => panic!("expected cap exceeded, got {other:?}"),
        }
    }

    #[test]
    fn k3_free_level_three_stays_in_class() {
        let k = ClassSpec::builtin(Builtin::K3FreeGraphs);
        let carrier = match build_limit_approx(&k, 3, 24) {
            Ok(l) => l.carrier,
            Err(Error::CapExceeded { partial, .. }) => partial.carrier,
            Err(e) => panic!("{e}"),
        };
        assert!(k.member(&carrier).unwrap());
        assert!(audit_extension_property(&k, &carrier, 2).is_none());
    }

    #[test]
    fn ages() {
        assert_eq!(age(&complete_graph(3), 2), vec![graph(1, &[]), complete_graph(2)]);
        let a = age(&path_graph(3), 2);
        assert_eq!(a.len(), 3);
        assert!(a.contains(&graph(2, &[])));
        assert_eq!(age(&chain(4), 3), vec![chain(1), chain(2), chain(3)]);
    }
}
