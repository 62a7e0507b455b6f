use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::signature::{Signature, Symbol};
use crate::error::{Error, Result};

/// A finite relational structure on the universe `0..size`.
///
/// Relations are stored densely: one bit per tuple in `size^arity`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    sig: Arc<Signature>,
    size: usize,
    rels: Vec<Vec<u64>>,
}

fn words_for(size: usize, arity: usize) -> usize {
    size.pow(arity as u32).div_ceil(64)
}

impl Structure {
    /// Structure with no tuples at all. The order symbol (if any) is left
    /// empty, so this is only valid for sizes below 2 unless filled in.
    pub(crate) fn blank(sig: Arc<Signature>, size: usize) -> Structure {
        let rels = sig.symbols().iter().map(|s| vec![0u64; words_for(size, s.arity)]).collect();
        Structure { sig, size, rels }
    }

    /// Builds a structure from named relations and validates it.
    pub fn new<'a, I, T>(sig: Arc<Signature>, size: usize, relations: I) -> Result<Structure>
    where
        I: IntoIterator<Item = (&'a str, T)>,
        T: IntoIterator<Item = Vec<usize>>,
    {
        let mut tuples = Vec::new();
        for (name, ts) in relations {
            let sym = sig
                .index_of(name)
                .ok_or_else(|| Error::InvalidStructure(format!("unknown symbol `{name}`")))?;
            tuples.extend(ts.into_iter().map(|t| (sym, t)));
        }
        Structure::from_tuples(sig, size, tuples)
    }

    /// Builds a structure from `(symbol index, tuple)` pairs and validates it.
    pub fn from_tuples<I>(sig: Arc<Signature>, size: usize, tuples: I) -> Result<Structure>
    where
        I: IntoIterator<Item = (usize, Vec<usize>)>,
    {
        let mut s = Structure::blank(sig, size);
        for (sym, t) in tuples {
            if sym >= s.sig.len() {
                return Err(Error::InvalidStructure(format!("symbol index {sym} out of range")));
            }
            let arity = s.sig.arity(sym);
            if t.len() != arity {
                return Err(Error::InvalidStructure(format!(
                    "tuple {t:?} for `{}` has length {}, expected {arity}",
                    s.sig.symbols()[sym].name,
                    t.len()
                )));
            }
            if let Some(&p) = t.iter().find(|&&p| p >= size) {
                return Err(Error::PointOutOfRange { point: p, size });
            }
            s.set(sym, &t, true);
        }
        s.validate()?;
        Ok(s)
    }

    /// Checks that the order symbol, if present, is a strict linear order.
    pub fn validate(&self) -> Result<()> {
        let Some(o) = self.sig.order_index() else { return Ok(()) };
        let n = self.size;
        for a in 0..n {
            if self.holds(o, &[a, a]) {
                return Err(Error::InvalidStructure(format!("order is reflexive at {a}")));
            }
            for b in (a + 1)..n {
                if self.holds(o, &[a, b]) == self.holds(o, &[b, a]) {
                    return Err(Error::InvalidStructure(format!(
                        "order does not compare {a} and {b} exactly one way"
                    )));
                }
            }
        }
        // totality + antisymmetry make the out-degrees a permutation of 0..n iff transitive
        let mut seen = vec![false; n];
        for a in 0..n {
            let below = (0..n).filter(|&b| self.holds(o, &[b, a])).count();
            if seen[below] {
                return Err(Error::InvalidStructure("order is not transitive".into()));
            }
            seen[below] = true;
        }
        Ok(())
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    fn offset(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &p| acc * self.size + p)
    }

    #[inline]
    pub fn holds(&self, sym: usize, tuple: &[usize]) -> bool {
        let off = self.offset(tuple);
        self.rels[sym][off / 64] >> (off % 64) & 1 == 1
    }

    #[inline]
    pub(crate) fn set(&mut self, sym: usize, tuple: &[usize], value: bool) {
        let off = self.offset(tuple);
        let word = &mut self.rels[sym][off / 64];
        if value {
            *word |= 1 << (off % 64);
        } else {
            *word &= !(1 << (off % 64));
        }
    }

    /// All tuples of a symbol, in lexicographic order.
    pub fn tuples(&self, sym: usize) -> Vec<Vec<usize>> {
        let arity = self.sig.arity(sym);
        let mut out = Vec::new();
        for_each_tuple(self.size, arity, |t| {
            if self.holds(sym, t) {
                out.push(t.to_vec());
            }
        });
        out
    }

    pub fn tuple_count(&self, sym: usize) -> usize {
        self.rels[sym].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// New structure whose point `i` is `points[i]` of `self`. Points must be
    /// distinct and in range.
    pub(crate) fn pull(&self, points: &[usize]) -> Structure {
        let m = points.len();
        let mut out = Structure::blank(self.sig.clone(), m);
        let mut image = Vec::new();
        for sym in 0..self.sig.len() {
            let arity = self.sig.arity(sym);
            for_each_tuple(m, arity, |t| {
                image.clear();
                image.extend(t.iter().map(|&i| points[i]));
                if self.holds(sym, &image) {
                    out.set(sym, t, true);
                }
            });
        }
        out
    }

    /// The induced substructure on `subset`, renumbered by increasing
    /// original index.
    pub fn induced_substructure(&self, subset: &[usize]) -> Result<Structure> {
        let mut pts = subset.to_vec();
        pts.sort_unstable();
        pts.dedup();
        if let Some(&p) = pts.iter().find(|&&p| p >= self.size) {
            return Err(Error::PointOutOfRange { point: p, size: self.size });
        }
        Ok(self.pull(&pts))
    }

    /// The isomorphic copy in which old point `v` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Structure> {
        if perm.len() != self.size {
            return Err(Error::InvalidPermutation(format!(
                "expected {} images, got {}",
                self.size,
                perm.len()
            )));
        }
        let mut inv = vec![usize::MAX; self.size];
        for (v, &img) in perm.iter().enumerate() {
            if img >= self.size || inv[img] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("{perm:?}")));
            }
            inv[img] = v;
        }
        Ok(self.pull(&inv))
    }

    /// Copy of `self` with `extra` isolated points appended (no tuples on them).
    pub(crate) fn grown(&self, extra: usize) -> Structure {
        let mut out = Structure::blank(self.sig.clone(), self.size + extra);
        for sym in 0..self.sig.len() {
            for t in self.tuples(sym) {
                out.set(sym, &t, true);
            }
        }
        out
    }

    /// Restriction to the symbols of `sig` (matched by name and arity).
    pub fn reduct(&self, sig: &Arc<Signature>) -> Result<Structure> {
        let mut out = Structure::blank(sig.clone(), self.size);
        for (i, s) in sig.symbols().iter().enumerate() {
            let src = self.sig.index_of(&s.name).filter(|&j| self.sig.arity(j) == s.arity);
            let src = src.ok_or_else(|| {
                Error::SignatureMismatch(format!("symbol `{}`/{} missing", s.name, s.arity))
            })?;
            out.rels[i] = self.rels[src].clone();
        }
        out.validate()?;
        Ok(out)
    }

    /// Rank of every point in the order relation (0 = least).
    pub fn order_ranks(&self) -> Option<Vec<usize>> {
        let o = self.sig.order_index()?;
        Some((0..self.size).map(|a| (0..self.size).filter(|&b| self.holds(o, &[b, a])).count()).collect())
    }

    pub(crate) fn same_signature(&self, other: &Structure) -> Result<()> {
        if self.sig == other.sig {
            Ok(())
        } else {
            Err(Error::SignatureMismatch(format!(
                "{:?} vs {:?}",
                self.sig.symbols(),
                other.sig.symbols()
            )))
        }
    }
}

impl fmt::Debug for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        m.entry(&"size", &self.size);
        for (i, s) in self.sig.symbols().iter().enumerate() {
            m.entry(&s.name, &self.tuples(i));
        }
        m.finish()
    }
}

/// Calls `f` on every tuple in `0..n` of the given arity, lexicographically.
pub(crate) fn for_each_tuple(n: usize, arity: usize, mut f: impl FnMut(&[usize])) {
    if n == 0 {
        return;
    }
    let mut t = vec![0usize; arity];
    loop {
        f(&t);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < n {
                break;
            }
            t[i] = 0;
        }
    }
}

/// Tuples over `0..=top` that mention `top`, in lexicographic order.
pub(crate) fn tuples_touching(arity: usize, top: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_tuple(top + 1, arity, |t| {
        if t.contains(&top) {
            out.push(t.to_vec());
        }
    });
    out
}

#[derive(Serialize, Deserialize)]
struct StructureRepr {
    signature: Vec<Symbol>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    order_symbol: Option<String>,
    size: usize,
    relations: BTreeMap<String, Vec<Vec<usize>>>,
}

impl Serialize for Structure {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let relations = self
            .sig
            .symbols()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.name.clone(), self.tuples(i)))
            .collect();
        StructureRepr {
            signature: self.sig.symbols().to_vec(),
            order_symbol: self.sig.order_symbol().map(str::to_owned),
            size: self.size,
            relations,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Structure {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = StructureRepr::deserialize(deserializer)?;
        let sig = Signature::new(repr.signature, repr.order_symbol.as_deref())
            .map_err(serde::de::Error::custom)?;
        let sig = Arc::new(sig);
        for name in repr.relations.keys() {
            if sig.index_of(name).is_none() {
                return Err(serde::de::Error::custom(format!("relation for undeclared symbol `{name}`")));
            }
        }
        Structure::new(sig, repr.size, repr.relations.iter().map(|(k, v)| (k.as_str(), v.clone())))
            .map_err(serde::de::Error::custom)
    }
}
