//! Bounded checks of hereditarity, joint embedding and amalgamation.

use std::ops::ControlFlow;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use super::ClassSpec;
use crate::structures::{find_embeddings, Embedder, Structure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum AxiomVerdict {
    Pass,
    Fail,
    /// The witness cap was reached before the search was exhausted.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HpOutcome {
    pub verdict: AxiomVerdict,
    /// A member and a point subset whose induced substructure is not a member.
    pub counterexample: Option<(Structure, Vec<usize>)>,
    pub members_checked: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JepFailure {
    pub a: Structure,
    pub b: Structure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JepOutcome {
    pub verdict: AxiomVerdict,
    pub counterexample: Option<JepFailure>,
    pub pairs_checked: usize,
    /// Size of the largest witness that was needed.
    pub largest_witness: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApFailure {
    pub a: Structure,
    pub b: Structure,
    pub c: Structure,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ApOutcome {
    pub verdict: AxiomVerdict,
    pub counterexample: Option<ApFailure>,
    pub diagrams_checked: usize,
    pub largest_witness: usize,
}

/// Every induced substructure of every member of size `<= n` is a member.
/// Members are enumerated without assuming hereditarity. The first failure
/// is reported in (size, canonical form, subset size, subset) order.
pub fn check_hp(k: &ClassSpec, n: usize) -> HpOutcome {
    let filter = |s: &Structure| k.contains(s);
    let levels = crate::structures::enumerate_levels(&k.domain(), n, false, Some(&filter));
    let members: Vec<Structure> = levels.into_iter().flatten().collect();
    let first = members.par_iter().find_map_first(|m| {
        (0..=m.size()).find_map(|r| {
            (0..m.size()).combinations(r).find(|subset| !k.contains(&m.pull(subset))).map(|s| (m.clone(), s))
        })
    });
    HpOutcome {
        verdict: if first.is_some() { AxiomVerdict::Fail } else { AxiomVerdict::Pass },
        counterexample: first,
        members_checked: members.len(),
    }
}

enum Search {
    Found(usize),
    Exhausted,
    Capped,
}

/// Every pair of members of size `<= n` embeds jointly into a member of
/// size `<= cap`.
pub fn check_jep(k: &ClassSpec, n: usize, cap: usize) -> JepOutcome {
    let cap = cap.max(n);
    let levels = k.members_up_to(cap);
    let small: Vec<&Structure> = levels[..=n].iter().flatten().collect();
    let pairs: Vec<(usize, usize)> = (0..small.len()).flat_map(|i| (i..small.len()).map(move |j| (i, j))).collect();
    let hereditary = k.is_hereditary();
    let results: Vec<Search> = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (a, b) = (small[i], small[j]);
            let bound = a.size() + b.size();
            let top = if hereditary { bound.min(cap) } else { cap };
            for d in levels[a.size().max(b.size())..=top].iter().flatten() {
                if Embedder::new(a, d).first(None, None).is_some() && Embedder::new(b, d).first(None, None).is_some() {
                    return Search::Found(d.size());
                }
            }
            if hereditary && cap >= bound {
                Search::Exhausted
            } else {
                Search::Capped
            }
        })
        .collect();
    let (verdict, counterexample, largest) = summarize(&results, |idx| {
        let (i, j) = pairs[idx];
        JepFailure { a: small[i].clone(), b: small[j].clone() }
    });
    JepOutcome { verdict, counterexample, pairs_checked: pairs.len(), largest_witness: largest }
}

fn summarize<T>(results: &[Search], failure: impl Fn(usize) -> T) -> (AxiomVerdict, Option<T>, usize) {
    let largest = results.iter().filter_map(|r| if let Search::Found(s) = r { Some(*s) } else { None }).max().unwrap_or(0);
    match results.iter().position(|r| !matches!(r, Search::Found(_))) {
        None => (AxiomVerdict::Pass, None, largest),
        Some(idx) => {
            let verdict = if matches!(results[idx], Search::Exhausted) { AxiomVerdict::Fail } else { AxiomVerdict::Inconclusive };
            (verdict, Some(failure(idx)), largest)
        }
    }
}

fn automorphisms(x: &Structure) -> Vec<Vec<usize>> {
    find_embeddings(x, x).expect("same signature")
}

/// Lexicographically least representative of the diagram `(f, g)` under
/// `(f, g) ~ (beta f alpha, gamma g alpha)`.
fn diagram_key(f: &[usize], g: &[usize], aut_a: &[Vec<usize>], aut_b: &[Vec<usize>], aut_c: &[Vec<usize>]) -> (Vec<usize>, Vec<usize>) {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for alpha in aut_a {
        for beta in aut_b {
            let f2: Vec<usize> = alpha.iter().map(|&i| beta[f[i]]).collect();
            if best.as_ref().is_some_and(|(bf, _)| f2 > *bf) {
                continue;
            }
            for gamma in aut_c {
                let g2: Vec<usize> = alpha.iter().map(|&i| gamma[g[i]]).collect();
                let cand = (f2.clone(), g2);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
    }
    best.unwrap_or_default()
}

/// Every diagram `f: A -> B`, `g: A -> C` of members with `|A| <= n - 1`
/// and `|B|, |C| <= n` completes to a member `D` of size `<= cap`.
/// Diagrams are taken up to automorphisms of `A`, `B` and `C`; candidate
/// `D` go by size, then canonical order, and may identify points of
/// `B - f(A)` with points of `C - g(A)`.
pub fn check_ap(k: &ClassSpec, n: usize, cap: usize) -> ApOutcome {
    let cap = cap.max(n);
    let levels = k.members_up_to(cap);
    let small: Vec<&Structure> = levels[..=n].iter().flatten().collect();
    let auts: Vec<Vec<Vec<usize>>> = small.iter().map(|s| automorphisms(s)).collect();

    let mut diagrams = Vec::new();
    for (ia, a) in small.iter().enumerate() {
        if a.size() + 1 > n {
            continue;
        }
        let embs: Vec<Vec<Vec<usize>>> =
            small.iter().map(|s| find_embeddings(a, s).expect("same signature")).collect();
        for (ic, gs) in embs.iter().enumerate().filter(|(_, e)| !e.is_empty()) {
            for (ib, fs) in embs.iter().enumerate().filter(|(_, e)| !e.is_empty()) {
                let mut seen = std::collections::BTreeSet::new();
                for f in fs {
                    for g in gs {
                        if seen.insert(diagram_key(f, g, &auts[ia], &auts[ib], &auts[ic])) {
                            diagrams.push((ia, ib, ic, f.clone(), g.clone()));
                        }
                    }
                }
            }
        }
    }

    let hereditary = k.is_hereditary();
    let results: Vec<Search> = diagrams
        .par_iter()
        .map(|(ia, ib, ic, f, g)| {
            let (a, b, c) = (small[*ia], small[*ib], small[*ic]);
            let bound = b.size() + c.size() - a.size();
            let top = if hereditary { bound.min(cap) } else { cap };
            for d in levels[b.size().max(c.size())..=top].iter().flatten() {
                if amalgamates(a, b, c, f, g, d) {
                    return Search::Found(d.size());
                }
            }
            if hereditary && cap >= bound {
                Search::Exhausted
            } else {
                Search::Capped
            }
        })
        .collect();
    let (verdict, counterexample, largest) = summarize(&results, |idx| {
        let (ia, ib, ic, f, g) = &diagrams[idx];
        ApFailure { a: small[*ia].clone(), b: small[*ib].clone(), c: small[*ic].clone(), f: f.clone(), g: g.clone() }
    });
    ApOutcome { verdict, counterexample, diagrams_checked: diagrams.len(), largest_witness: largest }
}

/// Whether embeddings `r: B -> D`, `s: C -> D` exist with `r f = s g`.
pub(crate) fn amalgamates(a: &Structure, b: &Structure, c: &Structure, f: &[usize], g: &[usize], d: &Structure) -> bool {
    let eb = Embedder::new(b, d);
    let ec = Embedder::new(c, d);
    let mut found = false;
    eb.search(None, None, |r| {
        let mut fixed = vec![None; c.size()];
        for i in 0..a.size() {
            fixed[g[i]] = Some(r[f[i]]);
        }
        if ec.first(Some(&fixed), None).is_some() {
            found = true;
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    found
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::classes::Builtin;
    use crate::structures::{Signature, Symbol};

    fn unary_p() -> Arc<Signature> {
        Arc::new(Signature::new(vec![Symbol::new("P", 1)], None).unwrap())
    }

    fn ordered_p() -> Arc<Signature> {
        Arc::new(Signature::new(vec![Symbol::new("<", 2), Symbol::new("P", 1)], Some("<")).unwrap())
    }

    /// `{<, P}` structures with at most one `P` point.
    pub(crate) fn two_p_forbidden() -> ClassSpec {
        let sig = ordered_p();
        let two = Structure::new(sig.clone(), 2, [("<", vec![vec![0, 1]]), ("P", vec![vec![0], vec![1]])]).unwrap();
        ClassSpec::forbidden(sig, vec![two]).unwrap()
    }

    #[test]
    fn hp_results() {
        assert_eq!(check_hp(&ClassSpec::builtin(Builtin::Graphs), 4).verdict, AxiomVerdict::Pass);
        assert_eq!(check_hp(&ClassSpec::builtin(Builtin::K3FreeGraphs), 4).verdict, AxiomVerdict::Pass);
        let even = check_hp(&ClassSpec::builtin(Builtin::EvenSizeSets), 3);
        assert_eq!(even.verdict, AxiomVerdict::Fail);
        let (m, subset) = even.counterexample.unwrap();
        assert_eq!((m.size(), subset.len()), (2, 1));
    }

    #[test]
    fn jep_results() {
        for b in [Builtin::Graphs, Builtin::LinearOrders] {
            let out = check_jep(&ClassSpec::builtin(b), 3, 6);
            assert_eq!(out.verdict, AxiomVerdict::Pass, "{}", b.name());
        }
        let sig = unary_p();
        let mixed = Structure::new(sig.clone(), 2, [("P", vec![vec![0]])]).unwrap();
        let k = ClassSpec::forbidden(sig, vec![mixed]).unwrap();
        let out = check_jep(&k, 1, 4);
        assert_eq!(out.verdict, AxiomVerdict::Fail);
        let JepFailure { a, b } = out.counterexample.unwrap();
        assert_eq!((a.size(), b.size()), (1, 1));
        assert_ne!(a.tuple_count(0), b.tuple_count(0));
    }

    #[test]
    fn ap_results() {
        assert_eq!(check_ap(&ClassSpec::builtin(Builtin::Graphs), 3, 5).verdict, AxiomVerdict::Pass);
        assert_eq!(check_ap(&ClassSpec::builtin(Builtin::K3FreeGraphs), 3, 5).verdict, AxiomVerdict::Pass);
        assert_eq!(check_ap(&ClassSpec::builtin(Builtin::LinearOrders), 3, 5).verdict, AxiomVerdict::Pass);
    }

    #[test]
    fn ap_fails_across_the_order() {
        let out = check_ap(&two_p_forbidden(), 2, 4);
        assert_eq!(out.verdict, AxiomVerdict::Fail);
        let ApFailure { a, b, c, f, g } = out.counterexample.unwrap();
        assert_eq!(a.size(), 1);
        assert!(!a.holds(1, &[0]));
        // B: a P point below the image of a; C: a P point above it.
        let (fb, gc) = (f[0], g[0]);
        let pb = 1 - fb;
        let pc = 1 - gc;
        assert!(b.holds(1, &[pb]) && b.holds(0, &[pb, fb]));
        assert!(c.holds(1, &[pc]) && c.holds(0, &[gc, pc]));
    }

    #[test]
    fn small_cap_is_inconclusive() {
        let out = check_ap(&two_p_forbidden(), 2, 2);
        assert_eq!(out.verdict, AxiomVerdict::Inconclusive);
    }

    #[test]
    fn non_hereditary_never_fails() {
        let out = check_jep(&ClassSpec::builtin(Builtin::EvenSizeSets), 2, 4);
        assert_ne!(out.verdict, AxiomVerdict::Fail);
    }
}
