use std::ops::ControlFlow;

use itertools::Itertools;

use super::structure::tuples_touching;
use super::Structure;
use crate::error::{Error, Result};

/// An injective map from `source`'s universe into `target`'s.
#[derive(Debug, Clone)]
pub struct EmbeddingMap<'a> {
    pub source: &'a Structure,
    pub target: &'a Structure,
    pub map: Vec<usize>,
}

/// True iff the map is injective and preserves and reflects every relation.
pub fn is_embedding(e: &EmbeddingMap<'_>) -> Result<bool> {
    e.source.same_signature(e.target)?;
    if e.map.len() != e.source.size() {
        return Ok(false);
    }
    let mut used = vec![false; e.target.size()];
    for &p in &e.map {
        if p >= e.target.size() || used[p] {
            return Ok(false);
        }
        used[p] = true;
    }
    let sig = e.source.signature();
    let mut ok = true;
    let mut image = Vec::new();
    for sym in 0..sig.len() {
        super::structure::for_each_tuple(e.source.size(), sig.arity(sym), |t| {
            if !ok {
                return;
            }
            image.clear();
            image.extend(t.iter().map(|&i| e.map[i]));
            ok = e.source.holds(sym, t) == e.target.holds(sym, &image);
        });
    }
    Ok(ok)
}

/// Backtracking embedding search from `src` into `dst`.
///
/// Source points are assigned in index order and target candidates are
/// tried in increasing order, so maps are produced lexicographically.
pub(crate) struct Embedder<'a> {
    src: &'a Structure,
    dst: &'a Structure,
    // checks[i]: (symbol, tuple over 0..=i touching i, value in src)
    checks: Vec<Vec<(usize, Vec<usize>, bool)>>,
}

impl<'a> Embedder<'a> {
    pub(crate) fn new(src: &'a Structure, dst: &'a Structure) -> Self {
        let sig = src.signature();
        let checks = (0..src.size())
            .map(|i| {
                let mut v = Vec::new();
                for sym in 0..sig.len() {
                    for t in tuples_touching(sig.arity(sym), i) {
                        let val = src.holds(sym, &t);
                        v.push((sym, t, val));
                    }
                }
                v
            })
            .collect();
        Embedder { src, dst, checks }
    }

    /// Visits embeddings agreeing with `fixed` (per source point) and whose
    /// free points land in `allowed` targets.
    pub(crate) fn search(
        &self,
        fixed: Option<&[Option<usize>]>,
        allowed: Option<&[bool]>,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
    ) {
        if self.src.size() > self.dst.size() {
            return;
        }
        let mut map = Vec::with_capacity(self.src.size());
        let mut used = vec![false; self.dst.size()];
        let _ = self.extend(&mut map, &mut used, fixed, allowed, &mut visit);
    }

    fn extend(
        &self,
        map: &mut Vec<usize>,
        used: &mut [bool],
        fixed: Option<&[Option<usize>]>,
        allowed: Option<&[bool]>,
        visit: &mut impl FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let i = map.len();
        if i == self.src.size() {
            return visit(map);
        }
        let forced = fixed.and_then(|f| f[i]);
        let candidates: Box<dyn Iterator<Item = usize>> = match forced {
            Some(t) => Box::new(std::iter::once(t)),
            None => Box::new(0..self.dst.size()),
        };
        let mut image = Vec::new();
        for t in candidates {
            if t >= self.dst.size() || used[t] {
                continue;
            }
            if forced.is_none() && allowed.is_some_and(|a| !a[t]) {
                continue;
            }
            map.push(t);
            let consistent = self.checks[i].iter().all(|(sym, tuple, val)| {
                image.clear();
                image.extend(tuple.iter().map(|&j| map[j]));
                self.dst.holds(*sym, &image) == *val
            });
            if consistent {
                used[t] = true;
                let flow = self.extend(map, used, fixed, allowed, visit);
                used[t] = false;
                if flow.is_break() {
                    map.pop();
                    return flow;
                }
            }
            map.pop();
        }
        ControlFlow::Continue(())
    }

    pub(crate) fn first(&self, fixed: Option<&[Option<usize>]>, allowed: Option<&[bool]>) -> Option<Vec<usize>> {
        let mut found = None;
        self.search(fixed, allowed, |m| {
            found = Some(m.to_vec());
            ControlFlow::Break(())
        });
        found
    }
}

/// All embeddings of `a` into `b`, lexicographic in the map.
pub fn find_embeddings(a: &Structure, b: &Structure) -> Result<Vec<Vec<usize>>> {
    a.same_signature(b)?;
    let mut out = Vec::new();
    Embedder::new(a, b).search(None, None, |m| {
        out.push(m.to_vec());
        ControlFlow::Continue(())
    });
    Ok(out)
}

/// Whether `a` embeds into `b` at all.
pub fn embeds(a: &Structure, b: &Structure) -> Result<bool> {
    a.same_signature(b)?;
    Ok(Embedder::new(a, b).first(None, None).is_some())
}

/// The first embedding of `a` into `b` extending the partial assignment `fixed`.
pub fn find_embedding_extending(a: &Structure, b: &Structure, fixed: &[Option<usize>]) -> Result<Option<Vec<usize>>> {
    a.same_signature(b)?;
    if fixed.len() != a.size() {
        return Err(Error::Precondition("partial map has the wrong length".into()));
    }
    Ok(Embedder::new(a, b).first(Some(fixed), None))
}

/// All point subsets of `c` whose induced substructure is isomorphic to `a`,
/// in lexicographic order.
pub fn copies_of(a: &Structure, c: &Structure) -> Result<Vec<Vec<usize>>> {
    a.same_signature(c)?;
    let k = a.size();
    if k > c.size() {
        return Ok(Vec::new());
    }
    let emb = Embedder::new(a, c);
    let mut allowed = vec![false; c.size()];
    let mut out = Vec::new();
    for subset in (0..c.size()).combinations(k) {
        for &p in &subset {
            allowed[p] = true;
        }
        if emb.first(None, Some(&allowed)).is_some() {
            out.push(subset.clone());
        }
        for &p in &subset {
            allowed[p] = false;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::builders::*;

    #[test]
    fn identity_is_embedding() {
        let a = cycle_graph(5);
        let e = EmbeddingMap { source: &a, target: &a, map: (0..5).collect() };
        assert!(is_embedding(&e).unwrap());
    }

    #[test]
    fn edge_into_non_edge_fails() {
        let k2 = complete_graph(2);
        let e2 = graph(2, &[]);
        assert!(!is_embedding(&EmbeddingMap { source: &k2, target: &e2, map: vec![0, 1] }).unwrap());
    }

    #[test]
    fn order_reversal_is_not_an_embedding() {
        let lo = chain(2);
        assert!(!is_embedding(&EmbeddingMap { source: &lo, target: &lo, map: vec![1, 0] }).unwrap());
    }

    #[test]
    fn non_injective_map_rejected() {
        let s = pure_set(2);
        assert!(!is_embedding(&EmbeddingMap { source: &s, target: &s, map: vec![0, 0] }).unwrap());
    }

    #[test]
    fn signature_mismatch_is_an_error() {
        let g = complete_graph(2);
        let o = chain(2);
        assert!(is_embedding(&EmbeddingMap { source: &g, target: &o, map: vec![0, 1] }).is_err());
        assert!(find_embeddings(&g, &o).is_err());
        assert!(copies_of(&g, &o).is_err());
    }

    #[test]
    fn embedding_counts() {
        assert_eq!(find_embeddings(&graph(1, &[]), &graph(2, &[])).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(
            find_embeddings(&chain(2), &chain(3)).unwrap(),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert!(find_embeddings(&complete_graph(2), &graph(2, &[])).unwrap().is_empty());
    }

    #[test]
    fn copies() {
        assert_eq!(copies_of(&complete_graph(2), &complete_graph(3)).unwrap().len(), 3);
        assert_eq!(copies_of(&chain(2), &chain(5)).unwrap().len(), 10);
        assert!(copies_of(&complete_graph(3), &path_graph(3)).unwrap().is_empty());
    }

    #[test]
    fn extending_respects_fixed_points() {
        let m = find_embedding_extending(&chain(2), &chain(4), &[Some(1), None]).unwrap();
        assert_eq!(m, Some(vec![1, 2]));
        let m = find_embedding_extending(&chain(2), &chain(4), &[Some(3), None]).unwrap();
        assert_eq!(m, None);
    }
}
