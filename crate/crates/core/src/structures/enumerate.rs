//! Enumeration of structures up to isomorphism by one-point augmentation.

use std::ops::ControlFlow;
use std::sync::Arc;

use rayon::prelude::*;

use super::canon::{canonical_labeling, CanonicalForm};
use super::structure::for_each_tuple;
use super::{Signature, Structure};
use crate::error::{Error, Result};

/// Shape constraint on a symbol's relation, used to skip relations that no
/// member of a class can carry. Membership is always re-checked in full.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelKind {
    /// Any set of tuples.
    Free,
    /// Symmetric and irreflexive.
    Graph,
    /// Irreflexive; exactly one direction per pair.
    Tournament,
    /// Symmetric and reflexive (transitivity is left to the class).
    Equivalence,
    /// The signature's order symbol.
    Order,
}

/// Per-symbol relation shapes over a signature.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Domain {
    sig: Arc<Signature>,
    kinds: Vec<RelKind>,
}

impl Domain {
    /// Every relation free except the order symbol.
    pub fn free(sig: Arc<Signature>) -> Domain {
        let kinds = (0..sig.len())
            .map(|i| if sig.order_index() == Some(i) { RelKind::Order } else { RelKind::Free })
            .collect();
        Domain { sig, kinds }
    }

    pub fn new(sig: Arc<Signature>, kinds: Vec<RelKind>) -> Result<Domain> {
        if kinds.len() != sig.len() {
            return Err(Error::InvalidSignature("one relation kind per symbol required".into()));
        }
        for (i, &k) in kinds.iter().enumerate() {
            let is_order = sig.order_index() == Some(i);
            if is_order != (k == RelKind::Order) {
                return Err(Error::InvalidSignature("the order kind must be used exactly for the order symbol".into()));
            }
            if k != RelKind::Free && sig.arity(i) != 2 {
                return Err(Error::InvalidSignature(format!("kind {k:?} needs a binary symbol")));
            }
        }
        Ok(Domain { sig, kinds })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn kinds(&self) -> &[RelKind] {
        &self.kinds
    }
}

/// One tuple assignment made when a point is added.
#[derive(Debug, Clone)]
pub(crate) struct Assign {
    pub sym: usize,
    pub tuple: Vec<usize>,
    pub value: bool,
}

/// A group of tuples decided together; exactly one option is chosen.
#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub options: Vec<Vec<Assign>>,
}

/// Slots covering every tuple that mentions the new point `n = base.size()`.
pub(crate) fn extension_slots(base: &Structure, domain: &Domain) -> Vec<Slot> {
    let n = base.size();
    let p = n;
    let mut slots = Vec::new();
    for (sym, &kind) in domain.kinds.iter().enumerate() {
        let arity = domain.sig.arity(sym);
        let single = |t: Vec<usize>, v: bool| vec![Assign { sym, tuple: t, value: v }];
        match kind {
            RelKind::Order => {
                let ranks = base.order_ranks().expect("order kind needs an order symbol");
                let options = (0..=n)
                    .map(|pos| {
                        let mut v = single(vec![p, p], false);
                        for (q, &r) in ranks.iter().enumerate() {
                            let below = r < pos;
                            v.push(Assign { sym, tuple: vec![q, p], value: below });
                            v.push(Assign { sym, tuple: vec![p, q], value: !below });
                        }
                        v
                    })
                    .collect();
                slots.push(Slot { options });
            }
            RelKind::Graph | RelKind::Equivalence => {
                let diag = kind == RelKind::Equivalence;
                slots.push(Slot { options: vec![single(vec![p, p], diag)] });
                for q in 0..n {
                    let opt = |v: bool| {
                        vec![
                            Assign { sym, tuple: vec![p, q], value: v },
                            Assign { sym, tuple: vec![q, p], value: v },
                        ]
                    };
                    slots.push(Slot { options: vec![opt(false), opt(true)] });
                }
            }
            RelKind::Tournament => {
                slots.push(Slot { options: vec![single(vec![p, p], false)] });
                for q in 0..n {
                    let opt = |out: bool| {
                        vec![
                            Assign { sym, tuple: vec![p, q], value: out },
                            Assign { sym, tuple: vec![q, p], value: !out },
                        ]
                    };
                    slots.push(Slot { options: vec![opt(false), opt(true)] });
                }
            }
            RelKind::Free => {
                for_each_tuple(n + 1, arity, |t| {
                    if t.contains(&p) {
                        slots.push(Slot { options: vec![single(t.to_vec(), false), single(t.to_vec(), true)] });
                    }
                });
            }
        }
    }
    slots
}

/// Visits every one-point extension of `base` whose slot choices are
/// allowed by `keep`. Options are tried in slot order, first slot most
/// significant, option 0 first.
pub(crate) fn for_each_extension(
    base: &Structure,
    domain: &Domain,
    keep: impl Fn(&Assign) -> bool,
    mut visit: impl FnMut(Structure) -> ControlFlow<()>,
) {
    let slots: Vec<Slot> = extension_slots(base, domain)
        .into_iter()
        .map(|s| Slot { options: s.options.into_iter().filter(|o| o.iter().all(&keep)).collect() })
        .collect();
    if slots.iter().any(|s| s.options.is_empty()) {
        return;
    }
    let grown = base.grown(1);
    let mut choice = vec![0usize; slots.len()];
    loop {
        let mut s = grown.clone();
        for (slot, &c) in slots.iter().zip(&choice) {
            for a in &slot.options[c] {
                s.set(a.sym, &a.tuple, a.value);
            }
        }
        if visit(s).is_break() {
            return;
        }
        let mut i = slots.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            choice[i] += 1;
            if choice[i] < slots[i].options.len() {
                break;
            }
            choice[i] = 0;
        }
    }
}

pub type Filter<'a> = &'a (dyn Fn(&Structure) -> bool + Sync);

/// One representative per isomorphism class of size-`n` structures over
/// `sig` passing `filter`, canonical and in canonical-form order.
pub fn enumerate_structures(sig: &Arc<Signature>, n: usize, filter: Option<Filter<'_>>) -> Vec<Structure> {
    enumerate_in_domain(&Domain::free(sig.clone()), n, false, filter)
}

/// As [`enumerate_structures`], restricted to a domain. With
/// `hereditary_filter` the filter is applied at every intermediate size,
/// which is only sound when the filtered class is closed under induced
/// substructures.
pub fn enumerate_in_domain(domain: &Domain, n: usize, hereditary_filter: bool, filter: Option<Filter<'_>>) -> Vec<Structure> {
    enumerate_levels(domain, n, hereditary_filter, filter).pop().unwrap_or_default()
}

/// Representatives of every size `0..=max`, indexed by size.
pub fn enumerate_levels(domain: &Domain, max: usize, hereditary_filter: bool, filter: Option<Filter<'_>>) -> Vec<Vec<Structure>> {
    let pass = |s: &Structure| filter.is_none_or(|f| f(s));
    let mut out = Vec::with_capacity(max + 1);
    let mut level: Vec<(CanonicalForm, Structure)> = {
        let empty = Structure::blank(domain.sig.clone(), 0);
        vec![(canonical_labeling(&empty).1, empty)]
    };
    for size in 0..=max {
        if hereditary_filter {
            level.retain(|(_, s)| pass(s));
            out.push(level.iter().map(|(_, s)| s.clone()).collect());
        } else {
            out.push(level.iter().map(|(_, s)| s).filter(|s| pass(s)).cloned().collect());
        }
        if size == max {
            break;
        }
        let mut next: Vec<(CanonicalForm, Structure)> = level
            .par_iter()
            .flat_map_iter(|(_, base)| {
                let mut exts = Vec::new();
                for_each_extension(base, domain, |_| true, |s| {
                    exts.push(s);
                    ControlFlow::Continue(())
                });
                exts.into_iter().map(|s| {
                    let (labels, form) = canonical_labeling(&s);
                    (form, s.pull(&labels))
                })
            })
            .collect();
        next.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        next.dedup_by(|a, b| a.0 == b.0);
        level = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::builders::*;
    use crate::structures::{are_isomorphic, canonical_form};

    fn is_graph(s: &Structure) -> bool {
        let n = s.size();
        (0..n).all(|a| !s.holds(0, &[a, a]) && (0..n).all(|b| s.holds(0, &[a, b]) == s.holds(0, &[b, a])))
    }

    fn is_tournament(s: &Structure) -> bool {
        let n = s.size();
        (0..n).all(|a| !s.holds(0, &[a, a]) && (0..n).filter(|&b| b != a).all(|b| s.holds(0, &[a, b]) != s.holds(0, &[b, a])))
    }

    #[test]
    fn graphs_on_three_vertices() {
        let sig = Arc::new(Signature::graph());
        let gs = enumerate_structures(&sig, 3, Some(&is_graph));
        assert_eq!(gs.len(), 4);
    }

    #[test]
    fn linear_orders_on_four_points() {
        let sig = Arc::new(Signature::linear_order());
        let los = enumerate_structures(&sig, 4, None);
        assert_eq!(los, vec![chain(4)]);
    }

    #[test]
    fn tournaments_on_three_vertices() {
        let sig = Arc::new(Signature::tournament());
        assert_eq!(enumerate_structures(&sig, 3, Some(&is_tournament)).len(), 2);
    }

    #[test]
    fn graph_domain_counts_match_oeis() {
        let d = Domain::new(Arc::new(Signature::graph()), vec![RelKind::Graph]).unwrap();
        let counts: Vec<usize> = (0..=6).map(|n| enumerate_in_domain(&d, n, false, None).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 11, 34, 156]);
        let t = Domain::new(Arc::new(Signature::tournament()), vec![RelKind::Tournament]).unwrap();
        let counts: Vec<usize> = (0..=5).map(|n| enumerate_in_domain(&t, n, false, None).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 4, 12]);
    }

    #[test]
    fn output_is_canonical_sorted_and_distinct() {
        let d = Domain::new(Arc::new(Signature::graph()), vec![RelKind::Graph]).unwrap();
        let gs = enumerate_in_domain(&d, 5, false, None);
        let forms: Vec<_> = gs.iter().map(canonical_form).collect();
        assert!(forms.windows(2).all(|w| w[0] < w[1]));
        for (i, a) in gs.iter().enumerate() {
            assert_eq!(crate::structures::canonical_representative(a), *a);
            for b in &gs[i + 1..] {
                assert!(!are_isomorphic(a, b).unwrap());
            }
        }
    }

    #[test]
    fn domain_validation() {
        let sig = Arc::new(Signature::linear_order());
        assert!(Domain::new(sig.clone(), vec![RelKind::Free]).is_err());
        assert!(Domain::new(sig, vec![RelKind::Order]).is_ok());
    }
}
