use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on materialized group elements.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;
/// Default cap on the group order for subgroup enumeration.
pub const DEFAULT_SUBGROUP_CAP: usize = 1_000;

/// A permutation of `0..n`, stored as its images.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    /// The cycle `(c[0] c[1] ... )` on `0..n`.
    pub fn cycle(n: usize, c: &[usize]) -> Result<Perm> {
        let mut images: Vec<usize> = (0..n).collect();
        for (i, &p) in c.iter().enumerate() {
            if p >= n {
                return Err(Error::InvalidPermutation(format!("cycle {c:?} on {n} points")));
            }
            images[p] = c[(i + 1) % c.len()];
        }
        Perm::new(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    /// `self` after `other`: `x -> self(other(x))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Perm{:?}", self.0)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Perm::new(Vec::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

type Closure = std::result::Result<Arc<Vec<Perm>>, usize>;

/// The group generated by `generators` inside `Sym(degree)`. Elements are
/// computed once on first use, by breadth-first closure, and kept sorted.
#[derive(Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    cap: usize,
    elements: OnceLock<Closure>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup").field("degree", &self.degree).field("generators", &self.generators).finish()
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.generators == other.generators
    }
}

impl Eq for PermGroup {}

#[derive(Serialize, Deserialize)]
struct GroupRepr {
    degree: usize,
    generators: Vec<Perm>,
}

impl Serialize for PermGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GroupRepr { degree: self.degree, generators: self.generators.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PermGroup {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GroupRepr::deserialize(d)?;
        PermGroup::new(r.degree, r.generators).map_err(serde::de::Error::custom)
    }
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!("{g:?} does not act on {degree} points")));
        }
        Ok(PermGroup { degree, generators, cap: DEFAULT_ELEMENT_CAP, elements: OnceLock::new() })
    }

    pub fn with_cap(mut self, cap: usize) -> PermGroup {
        self.cap = cap;
        self.elements = OnceLock::new();
        self
    }

    pub fn trivial(degree: usize) -> PermGroup {
        PermGroup::new(degree, vec![]).expect("no generators")
    }

    /// `Z/n` acting on `n` points by rotation.
    pub fn cyclic(n: usize) -> PermGroup {
        let gens = if n > 1 { vec![Perm::cycle(n, &(0..n).collect::<Vec<_>>()).expect("valid")] } else { vec![] };
        PermGroup::new(n, gens).expect("valid")
    }

    /// `Sym(n)` generated by the adjacent transpositions.
    pub fn symmetric(n: usize) -> PermGroup {
        let gens = (1..n).map(|i| Perm::cycle(n, &[i - 1, i]).expect("valid")).collect();
        PermGroup::new(n, gens).expect("valid")
    }

    /// Symmetries of the `n`-gon (order `2n` for `n >= 3`).
    pub fn dihedral(n: usize) -> PermGroup {
        if n < 3 {
            return PermGroup::symmetric(n);
        }
        let rot = Perm::cycle(n, &(0..n).collect::<Vec<_>>()).expect("valid");
        let refl = Perm::new((0..n).map(|i| (n - i) % n).collect()).expect("valid");
        PermGroup::new(n, vec![rot, refl]).expect("valid")
    }

    /// `Alt(n)` generated by the 3-cycles `(0 1 i)`.
    pub fn alternating(n: usize) -> PermGroup {
        let gens = (2..n).map(|i| Perm::cycle(n, &[0, 1, i]).expect("valid")).collect();
        PermGroup::new(n, gens).expect("valid")
    }

    /// Parses `cyclic:N`, `symmetric:N`, `dihedral:N`, `alternating:N` or `trivial:N`.
    pub fn from_spec(spec: &str) -> Result<PermGroup> {
        let (kind, n) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("group spec `{spec}` is not KIND:N")))?;
        let n: usize = n.trim().parse().map_err(|_| Error::Parse(format!("bad degree in `{spec}`")))?;
        match kind.trim() {
            "cyclic" => Ok(PermGroup::cyclic(n)),
            "symmetric" => Ok(PermGroup::symmetric(n)),
            "dihedral" => Ok(PermGroup::dihedral(n)),
            "alternating" => Ok(PermGroup::alternating(n)),
            "trivial" => Ok(PermGroup::trivial(n)),
            other => Err(Error::UnknownBuiltin(format!("group `{other}`"))),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// All elements, sorted (the identity comes first).
    pub fn elements(&self) -> Result<&[Perm]> {
        match self.elements.get_or_init(|| self.close()) {
            Ok(e) => Ok(e.as_slice()),
            Err(cap) => Err(Error::ElementCapExceeded(*cap)),
        }
    }

    fn close(&self) -> Closure {
        let id = Perm::identity(self.degree);
        let mut seen: BTreeSet<Perm> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(g) = queue.pop_front() {
            for s in &self.generators {
                let h = s.compose(&g);
                if !seen.contains(&h) {
                    if seen.len() >= self.cap {
                        return Err(self.cap);
                    }
                    seen.insert(h.clone());
                    queue.push_back(h);
                }
            }
        }
        Ok(Arc::new(seen.into_iter().collect()))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn index_of(&self, g: &Perm) -> Result<Option<usize>> {
        Ok(self.elements()?.binary_search(g).ok())
    }

    pub fn contains(&self, g: &Perm) -> Result<bool> {
        Ok(self.index_of(g)?.is_some())
    }

    /// The subgroup generated by `gens`, which must lie in `self`.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<PermGroup> {
        for g in &gens {
            if g.degree() != self.degree {
                return Err(Error::InvalidPermutation(format!("{g:?} does not act on {} points", self.degree)));
            }
            if !self.contains(g)? {
                return Err(Error::NotInGroup(g.images().to_vec()));
            }
        }
        Ok(PermGroup::new(self.degree, gens)?.with_cap(self.cap))
    }

    /// `table[i][j]` is the index of `e_i e_j`.
    pub fn multiplication_table(&self) -> Result<Vec<Vec<usize>>> {
        let els = self.elements()?;
        let index: HashMap<&Perm, usize> = els.iter().enumerate().map(|(i, g)| (g, i)).collect();
        Ok(els.iter().map(|a| els.iter().map(|b| index[&a.compose(b)]).collect()).collect())
    }
}

/// A subgroup given by its sorted element indices in the ambient group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subgroup {
    pub elements: Vec<usize>,
    pub generators: Vec<Perm>,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

fn close_indices(table: &[Vec<usize>], gens: &[usize]) -> BTreeSet<usize> {
    let mut set = BTreeSet::from([0]);
    let mut queue = vec![0];
    while let Some(a) = queue.pop() {
        for &s in gens {
            let c = table[s][a];
            if set.insert(c) {
                queue.push(c);
            }
        }
    }
    set
}

/// One subgroup per conjugacy class, ordered by (order, elements). Classes
/// are found by extending class representatives with one element at a time,
/// starting from the trivial subgroup, which reaches every class.
pub fn subgroups_up_to_conjugacy(g: &PermGroup, subgroup_cap: usize) -> Result<Vec<Subgroup>> {
    let order = g.order()?;
    if order > subgroup_cap {
        return Err(Error::SubgroupCapExceeded { order, cap: subgroup_cap });
    }
    let els = g.elements()?;
    let table = g.multiplication_table()?;
    let inv: Vec<usize> = (0..order).map(|i| (0..order).find(|&j| table[i][j] == 0).expect("group")).collect();
    let class_key = |set: &BTreeSet<usize>| -> Vec<usize> {
        (0..order)
            .map(|c| {
                let mut conj: Vec<usize> = set.iter().map(|&h| table[table[c][h]][inv[c]]).collect();
                conj.sort_unstable();
                conj
            })
            .min()
            .expect("nonempty group")
    };
    let trivial = BTreeSet::from([0]);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::from([class_key(&trivial)]);
    let mut reps: Vec<(BTreeSet<usize>, Vec<usize>)> = vec![(trivial, vec![])];
    let mut i = 0;
    while i < reps.len() {
        let (set, gens) = reps[i].clone();
        for x in 0..order {
            if set.contains(&x) {
                continue;
            }
            let mut gens2 = gens.clone();
            gens2.push(x);
            let bigger = close_indices(&table, &gens2);
            if seen.insert(class_key(&bigger)) {
                reps.push((bigger, gens2));
            }
        }
        i += 1;
    }
    let mut out: Vec<Subgroup> = reps
        .into_iter()
        .map(|(s, gens)| Subgroup {
            elements: s.into_iter().collect(),
            generators: gens.into_iter().map(|x| els[x].clone()).collect(),
        })
        .collect();
    out.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    Ok(out)
}
