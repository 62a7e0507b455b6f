use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::group::{Perm, PermGroup};
use crate::error::{Error, Result};
use crate::expansions::LinearOrdering;

/// Default cap on the number of points of a constructed flow.
pub const DEFAULT_POINT_CAP: usize = 5040;

/// A permutation group acting on the points `0..points`. The action is
/// given on generators and checked to extend to a group action; the full
/// table (element index by point) is built at construction.
#[derive(Debug, Clone)]
pub struct FiniteFlow {
    group: PermGroup,
    points: usize,
    generator_actions: Vec<Vec<usize>>,
    table: Arc<Vec<Vec<usize>>>,
    payloads: Option<Vec<LinearOrdering>>,
}

impl FiniteFlow {
    pub fn new(group: PermGroup, points: usize, generator_actions: Vec<Vec<usize>>) -> Result<FiniteFlow> {
        if generator_actions.len() != group.generators().len() {
            return Err(Error::InvalidAction("one point map per generator is required".into()));
        }
        for a in &generator_actions {
            if a.len() != points {
                return Err(Error::InvalidAction(format!("point map of length {} on {points} points", a.len())));
            }
            Perm::new(a.clone()).map_err(|_| Error::InvalidAction(format!("{a:?} is not a bijection")))?;
        }
        let table = Self::build_table(&group, points, &generator_actions)?;
        Ok(FiniteFlow { group, points, generator_actions, table: Arc::new(table), payloads: None })
    }

    /// Breadth-first walk over pairs (element, point map) from the
    /// identity; a second map reaching a known element means the
    /// generator maps do not define an action.
    fn build_table(group: &PermGroup, points: usize, gen_actions: &[Vec<usize>]) -> Result<Vec<Vec<usize>>> {
        let els = group.elements()?;
        let index: HashMap<&Perm, usize> = els.iter().enumerate().map(|(i, g)| (g, i)).collect();
        let mut table: Vec<Option<Vec<usize>>> = vec![None; els.len()];
        table[0] = Some((0..points).collect());
        let mut queue = vec![0usize];
        while let Some(gi) = queue.pop() {
            let pi_g = table[gi].clone().expect("queued elements have maps");
            for (s, act) in group.generators().iter().zip(gen_actions) {
                let h = index[&s.compose(&els[gi])];
                let pi_h: Vec<usize> = pi_g.iter().map(|&x| act[x]).collect();
                match &table[h] {
                    Some(existing) if *existing != pi_h => {
                        return Err(Error::InvalidAction(format!(
                            "element {:?} acts in two different ways",
                            els[h].images()
                        )))
                    }
                    Some(_) => {}
                    None => {
                        table[h] = Some(pi_h);
                        queue.push(h);
                    }
                }
            }
        }
        Ok(table.into_iter().map(|t| t.expect("generators reach every element")).collect())
    }

    pub fn with_payloads(mut self, payloads: Vec<LinearOrdering>) -> Result<FiniteFlow> {
        if payloads.len() != self.points {
            return Err(Error::Precondition("one payload per point is required".into()));
        }
        self.payloads = Some(payloads);
        Ok(self)
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn generator_actions(&self) -> &[Vec<usize>] {
        &self.generator_actions
    }

    pub fn payloads(&self) -> Option<&[LinearOrdering]> {
        self.payloads.as_deref()
    }

    /// Point maps of all group elements, indexed like `group().elements()`.
    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn act_index(&self, element: usize, x: usize) -> usize {
        self.table[element][x]
    }

    pub fn act(&self, g: &Perm, x: usize) -> Result<usize> {
        let i = self.group.index_of(g)?.ok_or_else(|| Error::NotInGroup(g.images().to_vec()))?;
        if x >= self.points {
            return Err(Error::PointOutOfRange { point: x, size: self.points });
        }
        Ok(self.table[i][x])
    }

    /// The action of `g` as a point map.
    pub fn point_map(&self, g: &Perm) -> Result<&[usize]> {
        let i = self.group.index_of(g)?.ok_or_else(|| Error::NotInGroup(g.images().to_vec()))?;
        Ok(&self.table[i])
    }

    pub fn dump(&self) -> FlowDump {
        FlowDump {
            group: self.group.clone(),
            points: self.points,
            payloads: self.payloads.clone(),
            generator_actions: self.generator_actions.clone(),
            elements: self.group.elements().map(|e| e.to_vec()).unwrap_or_default(),
            action_table: self.table.as_ref().clone(),
        }
    }
}

/// Serialized form of a flow.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlowDump {
    pub group: PermGroup,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub payloads: Option<Vec<LinearOrdering>>,
    pub generator_actions: Vec<Vec<usize>>,
    pub elements: Vec<Perm>,
    pub action_table: Vec<Vec<usize>>,
}

fn check_points(n: usize, cap: usize, what: &str) -> Result<()> {
    if n > cap {
        Err(Error::PointCapExceeded(format!("{what} has {n} points, cap is {cap}")))
    } else {
        Ok(())
    }
}

/// `Sym(n)` acting on the `n!` orderings of `0..n` by relabeling points:
/// `a (g.<) b` iff `g^-1(a) < g^-1(b)`. Points are the orderings in
/// lexicographic order of their sequences.
pub fn lo_flow(n: usize, point_cap: usize) -> Result<FiniteFlow> {
    if n == 0 {
        return Err(Error::Precondition("lo_flow needs n >= 1".into()));
    }
    let count = (1..=n).try_fold(1usize, |acc, i| acc.checked_mul(i)).unwrap_or(usize::MAX);
    check_points(count, point_cap, &format!("LO({n})"))?;
    let orders: Vec<LinearOrdering> = LinearOrdering::all(n).collect();
    let index: HashMap<&[usize], usize> = orders.iter().enumerate().map(|(i, o)| (o.sequence(), i)).collect();
    let group = PermGroup::symmetric(n);
    let actions = group
        .generators()
        .iter()
        .map(|s| {
            orders
                .iter()
                .map(|o| {
                    let moved: Vec<usize> = o.sequence().iter().map(|&p| s.apply(p)).collect();
                    index[moved.as_slice()]
                })
                .collect()
        })
        .collect();
    FiniteFlow::new(group, orders.len(), actions)?.with_payloads(orders)
}

/// `G` acting on itself by left multiplication; point `i` is element `i`.
pub fn regular_flow(g: &PermGroup) -> Result<FiniteFlow> {
    let els = g.elements()?;
    let index: HashMap<&Perm, usize> = els.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let actions = g.generators().iter().map(|s| els.iter().map(|x| index[&s.compose(x)]).collect()).collect();
    FiniteFlow::new(g.clone(), els.len(), actions)
}

/// `G` acting on the left cosets of the subgroup with element indices
/// `h`, ordered by their least element index.
pub fn coset_flow(g: &PermGroup, h: &[usize]) -> Result<FiniteFlow> {
    let els = g.elements()?;
    let index: HashMap<&Perm, usize> = els.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let mut coset_of = vec![usize::MAX; els.len()];
    let mut count = 0;
    for x in 0..els.len() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        for &hi in h {
            coset_of[index[&els[x].compose(&els[hi])]] = count;
        }
        count += 1;
    }
    let reps: Vec<usize> = (0..count).map(|c| coset_of.iter().position(|&k| k == c).expect("nonempty coset")).collect();
    let actions = g
        .generators()
        .iter()
        .map(|s| reps.iter().map(|&x| coset_of[index[&s.compose(&els[x])]]).collect())
        .collect();
    FiniteFlow::new(g.clone(), count, actions)
}

/// `G` acting on its own degree.
pub fn natural_flow(g: &PermGroup) -> Result<FiniteFlow> {
    let actions = g.generators().iter().map(|s| s.images().to_vec()).collect();
    FiniteFlow::new(g.clone(), g.degree(), actions)
}

pub fn point_flow(g: &PermGroup) -> Result<FiniteFlow> {
    FiniteFlow::new(g.clone(), 1, vec![vec![0]; g.generators().len()])
}

/// Disjoint union; points of `y` follow those of `x`.
pub fn disjoint_union(x: &FiniteFlow, y: &FiniteFlow) -> Result<FiniteFlow> {
    if x.group != y.group {
        return Err(Error::Precondition("flows over different groups".into()));
    }
    let n = x.points;
    let actions = x
        .generator_actions
        .iter()
        .zip(&y.generator_actions)
        .map(|(a, b)| a.iter().copied().chain(b.iter().map(|&p| p + n)).collect())
        .collect();
    FiniteFlow::new(x.group.clone(), n + y.points, actions)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lo_flow_small() {
        let f1 = lo_flow(1, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(f1.points(), 1);
        let f2 = lo_flow(2, DEFAULT_POINT_CAP).unwrap();
        assert_eq!(f2.points(), 2);
        assert_eq!(f2.generator_actions(), &[vec![1, 0]]);
        assert_eq!(lo_flow(3, DEFAULT_POINT_CAP).unwrap().points(), 6);
        assert!(matches!(lo_flow(5, 100), Err(Error::PointCapExceeded(_))));
    }

    #[test]
    fn lo_action_rule() {
        let f = lo_flow(3, DEFAULT_POINT_CAP).unwrap();
        let payloads = f.payloads().unwrap();
        for g in f.group().elements().unwrap() {
            let inv = g.inverse();
            for x in 0..f.points() {
                let y = f.act(g, x).unwrap();
                let (rx, ry) = (payloads[x].ranks(), payloads[y].ranks());
                for a in 0..3 {
                    for b in 0..3 {
                        assert_eq!(ry[a] < ry[b], rx[inv.apply(a)] < rx[inv.apply(b)]);
                    }
                }
            }
        }
    }

    #[test]
    fn bad_actions_rejected() {
        let g = PermGroup::cyclic(3);
        assert!(matches!(FiniteFlow::new(g.clone(), 2, vec![vec![1, 0]]), Err(Error::InvalidAction(_))));
        assert!(FiniteFlow::new(g.clone(), 2, vec![vec![0, 0]]).is_err());
        assert!(FiniteFlow::new(g, 3, vec![]).is_err());
    }

    #[test]
    fn coset_and_regular_sizes() {
        let g = PermGroup::symmetric(3);
        assert_eq!(regular_flow(&g).unwrap().points(), 6);
        let els = g.elements().unwrap();
        let t = els.iter().position(|p| p.images() == [1, 0, 2]).unwrap();
        assert_eq!(coset_flow(&g, &[0, t]).unwrap().points(), 3);
        assert_eq!(natural_flow(&g).unwrap().points(), 3);
        let u = disjoint_union(&point_flow(&g).unwrap(), &natural_flow(&g).unwrap()).unwrap();
        assert_eq!(u.points(), 4);
    }
}
