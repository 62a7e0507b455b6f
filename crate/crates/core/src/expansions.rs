//! Linear orderings of finite universes, admissible orderings of order
//! expansions, and orderings preserved by every partial automorphism.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::classes::{build_limit_approx, ClassSpec, LimitApprox};
use crate::error::{Error, Result};
use crate::structures::{Signature, Structure};

/// Largest universe whose orderings are enumerated one by one.
pub const MAX_ENUMERATED_POINTS: usize = 10;

/// A strict linear order on `0..n`, stored as the points from least to greatest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct LinearOrdering {
    seq: Vec<usize>,
}

impl LinearOrdering {
    pub fn new(seq: Vec<usize>) -> Result<LinearOrdering> {
        let mut seen = vec![false; seq.len()];
        for &p in &seq {
            if p >= seq.len() || seen[p] {
                return Err(Error::InvalidPermutation(format!("{seq:?} is not an ordering of 0..{}", seq.len())));
            }
            seen[p] = true;
        }
        Ok(LinearOrdering { seq })
    }

    /// `0 < 1 < ... < n-1`.
    pub fn natural(n: usize) -> LinearOrdering {
        LinearOrdering { seq: (0..n).collect() }
    }

    /// The ordering in which point `v` has rank `ranks[v]`.
    pub fn from_ranks(ranks: &[usize]) -> Result<LinearOrdering> {
        let mut seq = vec![usize::MAX; ranks.len()];
        for (v, &r) in ranks.iter().enumerate() {
            if r >= ranks.len() || seq[r] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{ranks:?} are not ranks")));
            }
            seq[r] = v;
        }
        Ok(LinearOrdering { seq })
    }

    /// Every ordering of `0..n`, lexicographic in the sequence.
    pub fn all(n: usize) -> impl Iterator<Item = LinearOrdering> {
        (0..n).permutations(n).map(|seq| LinearOrdering { seq })
    }

    pub fn size(&self) -> usize {
        self.seq.len()
    }

    pub fn sequence(&self) -> &[usize] {
        &self.seq
    }

    pub fn ranks(&self) -> Vec<usize> {
        let mut r = vec![0; self.seq.len()];
        for (i, &p) in self.seq.iter().enumerate() {
            r[p] = i;
        }
        r
    }

    pub fn reversed(&self) -> LinearOrdering {
        LinearOrdering { seq: self.seq.iter().rev().copied().collect() }
    }

    /// Restriction to `subset`, renumbered by increasing original index.
    pub fn restrict(&self, subset: &[usize]) -> LinearOrdering {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        let local: BTreeMap<usize, usize> = pts.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        LinearOrdering { seq: self.seq.iter().filter_map(|p| local.get(p).copied()).collect() }
    }

    /// `a0` expanded by this ordering, in signature `sig` (which must be the
    /// signature of `a0` plus an order symbol).
    pub fn expand(&self, a0: &Structure, sig: &Arc<Signature>) -> Result<Structure> {
        if self.size() != a0.size() {
            return Err(Error::Precondition(format!("ordering of {} points on a {}-point structure", self.size(), a0.size())));
        }
        let o = sig.order_index().ok_or_else(|| Error::NotAnOrderExpansion("signature has no order symbol".into()))?;
        if sig.without_order() != **a0.signature() {
            return Err(Error::SignatureMismatch("expansion signature does not extend the structure's".into()));
        }
        let mut s = Structure::blank(sig.clone(), a0.size());
        let base = a0.signature();
        for sym in 0..base.len() {
            let target = sig.index_of(&base.symbols()[sym].name).expect("checked above");
            for t in a0.tuples(sym) {
                s.set(target, &t, true);
            }
        }
        for (i, &a) in self.seq.iter().enumerate() {
            for &b in &self.seq[i + 1..] {
                s.set(o, &[a, b], true);
            }
        }
        Ok(s)
    }
}

impl<'de> Deserialize<'de> for LinearOrdering {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        LinearOrdering::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

pub fn reversal(o: &LinearOrdering) -> LinearOrdering {
    o.reversed()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingRole {
    Admissible,
    LocallyInvariant,
    FixedApprox,
}

/// A sorted, duplicate-free set of orderings of one universe.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderingSet {
    pub size: usize,
    pub role: OrderingRole,
    pub orderings: Vec<LinearOrdering>,
}

impl OrderingSet {
    pub fn new(size: usize, role: OrderingRole, mut orderings: Vec<LinearOrdering>) -> Result<OrderingSet> {
        if let Some(o) = orderings.iter().find(|o| o.size() != size) {
            return Err(Error::Precondition(format!("ordering {:?} is not on {size} points", o.sequence())));
        }
        orderings.sort();
        orderings.dedup();
        Ok(OrderingSet { size, role, orderings })
    }

    pub fn len(&self) -> usize {
        self.orderings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orderings.is_empty()
    }

    pub fn contains(&self, o: &LinearOrdering) -> bool {
        self.orderings.binary_search(o).is_ok()
    }
}

fn expansion_parts(k: &ClassSpec) -> Result<ClassSpec> {
    k.base_class()
        .ok_or_else(|| Error::NotAnOrderExpansion(format!("{} is not a known order expansion", k.label())))
}

/// The orderings `<` of `a0` with `(a0, <)` in `k`.
pub fn admissible_orderings(k: &ClassSpec, a0: &Structure) -> Result<OrderingSet> {
    let base = expansion_parts(k)?;
    if **a0.signature() != **base.signature() {
        return Err(Error::SignatureMismatch("structure is not over the base signature".into()));
    }
    if !base.contains(a0) {
        return Err(Error::NotAMember("A0"));
    }
    let n = a0.size();
    if n > MAX_ENUMERATED_POINTS {
        return Err(Error::SearchTooLarge(format!("{n}! orderings")));
    }
    let sig = k.signature();
    let mut out = Vec::new();
    for o in LinearOrdering::all(n) {
        if k.contains(&o.expand(a0, sig)?) {
            out.push(o);
        }
    }
    OrderingSet::new(n, OrderingRole::Admissible, out)
}

/// The orderings of `d0`'s universe preserved by every partial automorphism.
///
/// A partial automorphism sends `(a, b)` to `(c, d)` exactly when the
/// two-point substructures on `a, b` and `c, d` agree, so an ordering is
/// preserved iff `a < b` depends only on that substructure. A substructure
/// equal to its own reversal rules out every ordering; otherwise each
/// reversal pair of two-point types gets one direction and the linear ones
/// among these choices are kept.
pub fn locally_invariant_orderings(d0: &Structure) -> Result<OrderingSet> {
    let n = d0.size();
    if n < 2 {
        return OrderingSet::new(n, OrderingRole::LocallyInvariant, vec![LinearOrdering::natural(n)]);
    }
    let mut classes: HashMap<Structure, usize> = HashMap::new();
    let mut type_of = vec![vec![usize::MAX; n]; n];
    let mut reps: Vec<Structure> = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let t = d0.pull(&[a, b]);
            let next = reps.len();
            let id = *classes.entry(t.clone()).or_insert(next);
            if id == next {
                reps.push(t);
            }
            type_of[a][b] = id;
        }
    }
    // pair[t] = (index of the reversal pair, whether t is its first member)
    let mut pair: Vec<(usize, bool)> = vec![(usize::MAX, false); reps.len()];
    let mut pairs = 0;
    for a in 0..n {
        for b in 0..n {
            if a == b {
                continue;
            }
            let (t, r) = (type_of[a][b], type_of[b][a]);
            if t == r {
                return OrderingSet::new(n, OrderingRole::LocallyInvariant, vec![]);
            }
            if pair[t].0 == usize::MAX {
                pair[t] = (pairs, true);
                pair[r] = (pairs, false);
                pairs += 1;
            }
        }
    }
    if pairs > 24 {
        return Err(Error::SearchTooLarge(format!("{pairs} pairs of two-point types")));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << pairs) {
        let less = |a: usize, b: usize| {
            let (p, first) = pair[type_of[a][b]];
            ((mask >> p) & 1 == 1) == first
        };
        let ranks: Vec<usize> = (0..n).map(|a| (0..n).filter(|&b| b != a && less(b, a)).count()).collect();
        let Ok(o) = LinearOrdering::from_ranks(&ranks) else { continue };
        if (0..n).all(|a| (0..n).all(|b| a == b || less(a, b) == (ranks[a] < ranks[b]))) {
            out.push(o);
        }
    }
    OrderingSet::new(n, OrderingRole::LocallyInvariant, out)
}

/// Orderings of the level-`level` carrier that are admissible and preserved
/// by every partial automorphism of the expanded carrier.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixedOrderings {
    pub level: usize,
    pub carrier: Structure,
    pub reduct: Structure,
    pub carrier_closed: bool,
    pub orderings: OrderingSet,
}

/// Builds the level-`level` carrier of `k` and returns its fixed orderings.
/// A carrier that hits `cap` is used as it stands, with
/// `carrier_closed == false`.
pub fn fixed_orderings_approx(k0: &ClassSpec, k: &ClassSpec, level: usize, cap: usize) -> Result<FixedOrderings> {
    k.check_expands(k0)?;
    let approx = match build_limit_approx(k, level, cap) {
        Ok(l) => l,
        Err(Error::CapExceeded { partial, .. }) => *partial,
        Err(e) => return Err(e),
    };
    fixed_orderings_on(k0, k, approx)
}

pub fn fixed_orderings_on(k0: &ClassSpec, k: &ClassSpec, approx: LimitApprox) -> Result<FixedOrderings> {
    let LimitApprox { level, carrier, closed, .. } = approx;
    let reduct = carrier.reduct(k0.signature())?;
    let invariant = locally_invariant_orderings(&carrier)?;
    let mut kept = Vec::new();
    for o in invariant.orderings {
        if k.contains(&o.expand(&reduct, k.signature())?) {
            kept.push(o);
        }
    }
    let orderings = OrderingSet::new(carrier.size(), OrderingRole::FixedApprox, kept)?;
    Ok(FixedOrderings { level, carrier, reduct, carrier_closed: closed, orderings })
}
