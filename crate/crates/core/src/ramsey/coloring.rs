//! Exhaustive search for colorings that defeat every pattern.
//!
//! Items `0..m` get colors `0..k`. A pattern is a list of groups of items;
//! it is satisfied by a coloring when every one of its groups is
//! monochromatic. A coloring is bad when it satisfies no pattern. The
//! Ramsey-type properties hold exactly when no bad coloring exists.

use serde::{Deserialize, Serialize};

/// Default limit on search nodes (one node per item assignment).
pub const DEFAULT_BUDGET: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternFamily {
    pub items: usize,
    pub patterns: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColoringOutcome {
    /// Every coloring satisfies some pattern.
    NoBadColoring,
    /// A coloring satisfying no pattern (canonical under color renaming).
    Bad(Vec<usize>),
    /// The node budget ran out.
    BudgetExhausted,
}

impl PatternFamily {
    /// Sorts and deduplicates groups and patterns; drops empty groups.
    pub fn new(items: usize, patterns: Vec<Vec<Vec<usize>>>) -> PatternFamily {
        let mut patterns: Vec<Vec<Vec<usize>>> = patterns
            .into_iter()
            .map(|p| {
                let mut groups: Vec<Vec<usize>> = p
                    .into_iter()
                    .map(|mut g| {
                        g.sort_unstable();
                        g.dedup();
                        g
                    })
                    .filter(|g| g.len() > 1)
                    .collect();
                groups.sort();
                groups.dedup();
                groups
            })
            .collect();
        patterns.sort();
        patterns.dedup();
        PatternFamily { items, patterns }
    }

    fn satisfied(pattern: &[Vec<usize>], coloring: &[usize]) -> bool {
        pattern.iter().all(|g| g.iter().all(|&i| coloring[i] == coloring[g[0]]))
    }

    /// Whether `coloring` satisfies no pattern.
    pub fn is_bad(&self, coloring: &[usize]) -> bool {
        coloring.len() == self.items && !self.patterns.iter().any(|p| Self::satisfied(p, coloring))
    }

    /// Depth-first search over colorings with colors introduced in order
    /// (color `c` is used only after `c - 1`), which leaves one coloring per
    /// renaming class. A pattern is checked once its last item is colored.
    pub fn search(&self, k: usize, budget: u64) -> (ColoringOutcome, u64) {
        if self.patterns.iter().any(|p| p.is_empty()) {
            return (ColoringOutcome::NoBadColoring, 0);
        }
        if self.items == 0 {
            return (ColoringOutcome::Bad(vec![]), 0);
        }
        if k == 0 {
            return (ColoringOutcome::NoBadColoring, 0);
        }
        let mut due: Vec<Vec<usize>> = vec![Vec::new(); self.items];
        for (pi, p) in self.patterns.iter().enumerate() {
            let last = p.iter().flatten().copied().max().expect("nonempty groups");
            due[last].push(pi);
        }
        let mut st = State { family: self, due: &due, k, budget, nodes: 0, coloring: vec![0; self.items] };
        let outcome = match st.dfs(0, 0) {
            Step::Found => ColoringOutcome::Bad(st.coloring.clone()),
            Step::Exhausted => ColoringOutcome::NoBadColoring,
            Step::OutOfBudget => ColoringOutcome::BudgetExhausted,
        };
        (outcome, st.nodes)
    }
}

enum Step {
    Found,
    Exhausted,
    OutOfBudget,
}

struct State<'a> {
    family: &'a PatternFamily,
    due: &'a [Vec<usize>],
    k: usize,
    budget: u64,
    nodes: u64,
    coloring: Vec<usize>,
}

impl State<'_> {
    fn dfs(&mut self, i: usize, used: usize) -> Step {
        if i == self.coloring.len() {
            return Step::Found;
        }
        for c in 0..self.k.min(used + 1) {
            if self.nodes >= self.budget {
                return Step::OutOfBudget;
            }
            self.nodes += 1;
            self.coloring[i] = c;
            let ok = self.due[i]
                .iter()
                .all(|&p| !PatternFamily::satisfied(&self.family.patterns[p], &self.coloring));
            if ok {
                match self.dfs(i + 1, used.max(c + 1)) {
                    Step::Exhausted => {}
                    other => return other,
                }
            }
        }
        Step::Exhausted
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangles_in_k(n: usize) -> PatternFamily {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                edges.push((a, b));
            }
        }
        let idx = |a: usize, b: usize| edges.iter().position(|&e| e == (a.min(b), a.max(b))).unwrap();
        let mut pats = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                for c in (b + 1)..n {
                    pats.push(vec![vec![idx(a, b), idx(a, c), idx(b, c)]]);
                }
            }
        }
        PatternFamily::new(edges.len(), pats)
    }

    #[test]
    fn monochromatic_triangles() {
        let (out, _) = triangles_in_k(5).search(2, DEFAULT_BUDGET);
        let ColoringOutcome::Bad(c) = out else { panic!("K5 has a good 2-coloring") };
        assert!(triangles_in_k(5).is_bad(&c));
        assert_eq!(triangles_in_k(6).search(2, DEFAULT_BUDGET).0, ColoringOutcome::NoBadColoring);
    }

    #[test]
    fn budget_is_respected() {
        let (out, nodes) = triangles_in_k(6).search(2, 10);
        assert_eq!(out, ColoringOutcome::BudgetExhausted);
        assert!(nodes <= 10);
    }

    #[test]
    fn one_color() {
        assert_eq!(PatternFamily::new(3, vec![vec![vec![0, 1, 2]]]).search(1, 100).0, ColoringOutcome::NoBadColoring);
        assert!(matches!(PatternFamily::new(3, vec![]).search(1, 100).0, ColoringOutcome::Bad(_)));
    }

    #[test]
    fn singleton_groups_are_always_monochromatic() {
        let f = PatternFamily::new(2, vec![vec![vec![0]], vec![vec![0, 1]]]);
        assert_eq!(f.search(2, 100).0, ColoringOutcome::NoBadColoring);
    }
}
