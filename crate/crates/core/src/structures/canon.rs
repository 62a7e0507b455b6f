//! Canonical labeling by exhaustive minimisation with refinement pruning.
//!
//! The encoding of a labeling lists, for each position `i` in turn, the bits
//! of every tuple over positions `0..=i` that mentions `i` (symbols in
//! signature order, tuples lexicographic). Because the bits of a prefix of
//! positions form a prefix of the encoding, partial labelings can be cut as
//! soon as they compare greater than the best complete one.
//!
//! Positions are filled cell by cell, where cells come from iterated degree
//! refinement. Vertices whose transposition is an automorphism ("twins") are
//! interchangeable, so only one per twin class is branched on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::structure::{for_each_tuple, tuples_touching};
use super::Structure;
use crate::error::Result;

/// Byte encoding that is equal for two structures (of one signature) iff
/// they are isomorphic.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        self.0.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s.len() % 2 != 0 {
            return Err(serde::de::Error::custom("odd-length hex"));
        }
        (0..s.len())
            .step_by(2)
            .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<u8>, _>>()
            .map(CanonicalForm)
    }
}

pub fn canonical_form(a: &Structure) -> CanonicalForm {
    canonical_labeling(a).1
}

/// The canonical isomorphic copy of `a`.
pub fn canonical_representative(a: &Structure) -> Structure {
    let (labels, _) = canonical_labeling(a);
    a.pull(&labels)
}

pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<bool> {
    a.same_signature(b)?;
    if a.size() != b.size() {
        return Ok(false);
    }
    let sig = a.signature();
    if (0..sig.len()).any(|s| a.tuple_count(s) != b.tuple_count(s)) {
        return Ok(false);
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// Returns `(labels, form)` where position `i` of the canonical copy is
/// original point `labels[i]`.
pub fn canonical_labeling(a: &Structure) -> (Vec<usize>, CanonicalForm) {
    let n = a.size();
    let colors = refine(a);
    let ncolors = colors.iter().copied().max().map_or(0, |m| m + 1);
    let mut by_color = vec![Vec::new(); ncolors];
    for (v, &c) in colors.iter().enumerate() {
        by_color[c].push(v);
    }
    let position_color: Vec<usize> =
        by_color.iter().enumerate().flat_map(|(c, vs)| std::iter::repeat(c).take(vs.len())).collect();

    let mut twin: Vec<usize> = (0..n).collect();
    for vs in &by_color {
        for (i, &v) in vs.iter().enumerate() {
            if let Some(&u) = vs[..i].iter().find(|&&u| twin[u] == u && transposition_is_automorphism(a, u, v)) {
                twin[v] = u;
            }
        }
    }

    let sig = a.signature();
    let depth_tuples: Vec<Vec<(usize, Vec<usize>)>> = (0..n)
        .map(|i| {
            (0..sig.len())
                .flat_map(|sym| tuples_touching(sig.arity(sym), i).into_iter().map(move |t| (sym, t)))
                .collect()
        })
        .collect();

    let mut search = Search {
        a,
        by_color: &by_color,
        position_color: &position_color,
        twin: &twin,
        depth_tuples: &depth_tuples,
        best: None,
        best_labels: Vec::new(),
        labels: Vec::with_capacity(n),
        bits: Vec::new(),
        used: vec![false; n],
    };
    search.dfs();
    let bits = search.best.unwrap_or_default();
    (search.best_labels, CanonicalForm(pack(n, &bits)))
}

fn pack(n: usize, bits: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(4 + bits.len().div_ceil(8));
    out.extend_from_slice(&(n as u32).to_be_bytes());
    for chunk in bits.chunks(8) {
        let mut byte = 0u8;
        for (j, &b) in chunk.iter().enumerate() {
            byte |= b << (7 - j);
        }
        out.push(byte);
    }
    out
}

struct Search<'a> {
    a: &'a Structure,
    by_color: &'a [Vec<usize>],
    position_color: &'a [usize],
    twin: &'a [usize],
    depth_tuples: &'a [Vec<(usize, Vec<usize>)>],
    best: Option<Vec<u8>>,
    best_labels: Vec<usize>,
    labels: Vec<usize>,
    bits: Vec<u8>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn dfs(&mut self) {
        let depth = self.labels.len();
        if depth == self.a.size() {
            if self.best.as_ref().is_none_or(|b| self.bits.as_slice() < b.as_slice()) {
                self.best = Some(self.bits.clone());
                self.best_labels = self.labels.clone();
            }
            return;
        }
        let color = self.position_color[depth];
        let mut tried_twins: Vec<usize> = Vec::new();
        for idx in 0..self.by_color[color].len() {
            let v = self.by_color[color][idx];
            if self.used[v] || tried_twins.contains(&self.twin[v]) {
                continue;
            }
            tried_twins.push(self.twin[v]);
            self.labels.push(v);
            let mark = self.bits.len();
            let mut image = Vec::new();
            for (sym, t) in &self.depth_tuples[depth] {
                image.clear();
                image.extend(t.iter().map(|&p| self.labels[p]));
                self.bits.push(self.a.holds(*sym, &image) as u8);
            }
            let worse = match &self.best {
                None => false,
                Some(b) => self.bits.as_slice().cmp(&b[..self.bits.len()]) == Ordering::Greater,
            };
            if !worse {
                self.used[v] = true;
                self.dfs();
                self.used[v] = false;
            }
            self.bits.truncate(mark);
            self.labels.pop();
        }
    }
}

fn transposition_is_automorphism(a: &Structure, u: usize, v: usize) -> bool {
    let swap = |p: usize| if p == u { v } else if p == v { u } else { p };
    let sig = a.signature();
    let mut ok = true;
    let mut image = Vec::new();
    for sym in 0..sig.len() {
        for_each_tuple(a.size(), sig.arity(sym), |t| {
            if !ok || !t.iter().any(|&p| p == u || p == v) {
                return;
            }
            image.clear();
            image.extend(t.iter().map(|&p| swap(p)));
            ok = a.holds(sym, t) == a.holds(sym, &image);
        });
        if !ok {
            break;
        }
    }
    ok
}

/// Iterated colour refinement. Colours are ranks of isomorphism-invariant
/// keys, sorted descending, so isomorphic structures get matching cells.
fn refine(a: &Structure) -> Vec<usize> {
    let n = a.size();
    let sig = a.signature();
    let mut keys: Vec<Vec<u64>> = vec![Vec::new(); n];
    for sym in 0..sig.len() {
        let arity = sig.arity(sym);
        let mut counts = vec![vec![0u64; arity + 1]; n];
        for_each_tuple(n, arity, |t| {
            if a.holds(sym, t) {
                for (j, &p) in t.iter().enumerate() {
                    counts[p][j] += 1;
                }
                if t.iter().all(|&p| p == t[0]) {
                    counts[t[0]][arity] += 1;
                }
            }
        });
        for (v, c) in counts.into_iter().enumerate() {
            keys[v].extend(c);
        }
    }
    let binary: Vec<usize> = (0..sig.len()).filter(|&s| sig.arity(s) == 2).collect();
    let mut colors = rank(&keys);
    loop {
        let count = colors.iter().copied().max().map_or(0, |m| m + 1);
        if binary.is_empty() || count == n {
            return colors;
        }
        let next_keys: Vec<(usize, Vec<(Vec<bool>, usize)>)> = (0..n)
            .map(|v| {
                let mut nbrs: Vec<(Vec<bool>, usize)> = (0..n)
                    .filter(|&w| w != v)
                    .map(|w| {
                        let pattern =
                            binary.iter().flat_map(|&s| [a.holds(s, &[v, w]), a.holds(s, &[w, v])]).collect();
                        (pattern, colors[w])
                    })
                    .collect();
                nbrs.sort();
                (colors[v], nbrs)
            })
            .collect();
        let next = rank(&next_keys);
        let next_count = next.iter().copied().max().map_or(0, |m| m + 1);
        if next_count == count {
            return colors;
        }
        colors = next;
    }
}

fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut distinct: BTreeMap<K, usize> = keys.iter().cloned().map(|k| (k, 0)).collect();
    let total = distinct.len();
    for (i, (_, r)) in distinct.iter_mut().enumerate() {
        *r = total - 1 - i;
    }
    keys.iter().map(|k| distinct[k]).collect()
}
