use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use super::flow::{coset_flow, regular_flow, FiniteFlow};
use super::group::{subgroups_up_to_conjugacy, Perm, PermGroup, Subgroup};
use crate::error::{Error, Result};

/// Reading of finite flows used throughout.
pub const FINITE_FLOW_NOTE: &str =
    "finite discrete analog: every subset is closed, so minimal means a single orbit and orbit closures are orbits";

fn generator_maps(flow: &FiniteFlow, h: &[Perm]) -> Result<Vec<Vec<usize>>> {
    h.iter().map(|g| flow.point_map(g).map(<[usize]>::to_vec)).collect()
}

fn orbits_of(points: usize, maps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; points];
    let mut out = Vec::new();
    for start in 0..points {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for m in maps {
                let y = m[x];
                if !seen[y] {
                    seen[y] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    out
}

/// Orbits of the whole group, each sorted, ordered by least point.
pub fn orbits(flow: &FiniteFlow) -> Vec<Vec<usize>> {
    orbits_of(flow.points(), flow.generator_actions())
}

/// Orbits of the subgroup generated by `h`.
pub fn orbits_under(flow: &FiniteFlow, h: &[Perm]) -> Result<Vec<Vec<usize>>> {
    Ok(orbits_of(flow.points(), &generator_maps(flow, h)?))
}

/// Points fixed by every element of `h` (hence by the group it generates).
pub fn fix_set(flow: &FiniteFlow, h: &[Perm]) -> Result<Vec<usize>> {
    let maps = generator_maps(flow, h)?;
    Ok((0..flow.points()).filter(|&x| maps.iter().all(|m| m[x] == x)).collect())
}

/// Elements fixing `x`, in the group's element order.
pub fn stabilizer(flow: &FiniteFlow, x: usize) -> Result<Vec<Perm>> {
    if x >= flow.points() {
        return Err(Error::PointOutOfRange { point: x, size: flow.points() });
    }
    let els = flow.group().elements()?;
    Ok(flow.table().iter().zip(els).filter(|(m, _)| m[x] == x).map(|(_, g)| g.clone()).collect())
}

fn stabilizer_indices(flow: &FiniteFlow, x: usize) -> Vec<usize> {
    flow.table().iter().enumerate().filter(|(_, m)| m[x] == x).map(|(i, _)| i).collect()
}

pub fn is_minimal(flow: &FiniteFlow) -> bool {
    flow.points() > 0 && orbits(flow).len() == 1
}

/// Every point of `y` has the whole flow as its orbit.
pub fn transitive_wrt(flow: &FiniteFlow, y: &[usize]) -> Result<bool> {
    if let Some(&p) = y.iter().find(|&&p| p >= flow.points()) {
        return Err(Error::PointOutOfRange { point: p, size: flow.points() });
    }
    let orbs = orbits(flow);
    Ok(y.iter().all(|&p| orbs.iter().any(|o| o.len() == flow.points() && o.binary_search(&p).is_ok())))
}

/// An equivariant surjection `x -> y`, if any. Orbits of `x` are handled in
/// order of least point; the representative of each goes to the least point
/// of `y` whose stabilizer contains its own, and later choices are
/// backtracked only if the images fail to cover `y`.
pub fn is_factor(x: &FiniteFlow, y: &FiniteFlow) -> Result<Option<Vec<usize>>> {
    if x.group() != y.group() {
        return Err(Error::Precondition("flows over different groups".into()));
    }
    let x_orbits = orbits(x);
    let y_orbits = orbits(y);
    let y_orbit_of: Vec<usize> = {
        let mut v = vec![0; y.points()];
        for (i, o) in y_orbits.iter().enumerate() {
            for &p in o {
                v[p] = i;
            }
        }
        v
    };
    let candidates: Vec<Vec<usize>> = x_orbits
        .iter()
        .map(|o| {
            let stab = stabilizer_indices(x, o[0]);
            (0..y.points()).filter(|&q| stab.iter().all(|&g| y.act_index(g, q) == q)).collect()
        })
        .collect();

    let mut choice = vec![usize::MAX; x_orbits.len()];
    let mut covered = vec![0usize; y_orbits.len()];
    if !choose(0, &candidates, &y_orbit_of, &mut choice, &mut covered) {
        return Ok(None);
    }
    let mut phi = vec![usize::MAX; x.points()];
    for (o, &q) in x_orbits.iter().zip(&choice) {
        phi[o[0]] = q;
        let mut queue = VecDeque::from([o[0]]);
        while let Some(p) = queue.pop_front() {
            for (ax, ay) in x.generator_actions().iter().zip(y.generator_actions()) {
                if phi[ax[p]] == usize::MAX {
                    phi[ax[p]] = ay[phi[p]];
                    queue.push_back(ax[p]);
                }
            }
        }
    }
    Ok(Some(phi))
}

fn choose(i: usize, candidates: &[Vec<usize>], y_orbit_of: &[usize], choice: &mut [usize], covered: &mut [usize]) -> bool {
    let uncovered = covered.iter().filter(|&&c| c == 0).count();
    if uncovered > candidates.len() - i {
        return false;
    }
    if i == candidates.len() {
        return uncovered == 0;
    }
    for &q in &candidates[i] {
        choice[i] = q;
        covered[y_orbit_of[q]] += 1;
        if choose(i + 1, candidates, y_orbit_of, choice, covered) {
            return true;
        }
        covered[y_orbit_of[q]] -= 1;
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniversalityCheck {
    pub universal: bool,
    /// Order and generators of the first subgroup whose coset flow is not a factor.
    pub missing: Option<Subgroup>,
    pub classes_checked: usize,
}

/// Whether every coset flow `G/H` (one `H` per conjugacy class) is a factor
/// of `flow`.
pub fn is_universal_finite(flow: &FiniteFlow, subgroup_cap: usize) -> Result<UniversalityCheck> {
    let g = flow.group();
    let classes = subgroups_up_to_conjugacy(g, subgroup_cap)?;
    for (i, h) in classes.iter().enumerate() {
        if is_factor(flow, &coset_flow(g, &h.elements)?)?.is_none() {
            return Ok(UniversalityCheck { universal: false, missing: Some(h.clone()), classes_checked: i + 1 });
        }
    }
    Ok(UniversalityCheck { universal: true, missing: None, classes_checked: classes.len() })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetFixCertificate {
    pub subgroup: Subgroup,
    /// A coset fixed by `H`, or none.
    pub fixed_point: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelEaCheck {
    pub fixed: bool,
    /// A point of the regular flow fixed by `H`.
    pub regular_fixed_point: Option<usize>,
    pub per_class: Vec<CosetFixCertificate>,
}

/// Whether `<h>` fixes a point of the regular flow of `g`, computed both
/// directly and as "fixes a point of every coset flow". Disagreement is an
/// [`Error::AuditMismatch`].
pub fn rel_ea_finite(g: &PermGroup, h: &[Perm], subgroup_cap: usize) -> Result<RelEaCheck> {
    let regular = regular_flow(g)?;
    let regular_fixed_point = fix_set(&regular, h)?.first().copied();
    let mut per_class = Vec::new();
    for sub in subgroups_up_to_conjugacy(g, subgroup_cap)? {
        let flow = coset_flow(g, &sub.elements)?;
        let fixed_point = fix_set(&flow, h)?.first().copied();
        per_class.push(CosetFixCertificate { subgroup: sub, fixed_point });
    }
    let everywhere = per_class.iter().all(|c| c.fixed_point.is_some());
    if everywhere != regular_fixed_point.is_some() {
        return Err(Error::AuditMismatch(format!(
            "regular flow says {}, coset flows say {everywhere}",
            regular_fixed_point.is_some()
        )));
    }
    Ok(RelEaCheck { fixed: everywhere, regular_fixed_point, per_class })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalityAudit {
    pub minimal: bool,
    pub fix_transitive: bool,
    pub stabilizer_order: usize,
    pub fix_size: usize,
    pub universal: Option<bool>,
    pub pass: bool,
}

/// With `G' = Stab(x)`, checks `minimal <=> Fix(G')` is transitive.
pub fn audit_minimality_equivalence(flow: &FiniteFlow, x: usize, subgroup_cap: usize) -> Result<MinimalityAudit> {
    let stab = stabilizer(flow, x)?;
    let fix = fix_set(flow, &stab)?;
    let minimal = is_minimal(flow);
    let fix_transitive = transitive_wrt(flow, &fix)?;
    let universal = match is_universal_finite(flow, subgroup_cap) {
        Ok(u) => Some(u.universal),
        Err(Error::SubgroupCapExceeded { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(MinimalityAudit {
        minimal,
        fix_transitive,
        stabilizer_order: stab.len(),
        fix_size: fix.len(),
        universal,
        pass: minimal == fix_transitive,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", content = "element", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MaximalFix {
    Maximal,
    Extendable(Perm),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalFixCheck {
    pub outcome: MaximalFix,
    pub elements_scanned: usize,
}

/// Looks for the least `g` outside `<h>` such that `h` and `g` still fix a
/// common point.
pub fn maximal_fixing_extension(flow: &FiniteFlow, h: &[Perm]) -> Result<MaximalFixCheck> {
    let base = fix_set(flow, h)?;
    if base.is_empty() {
        return Err(Error::Precondition("H fixes no point".into()));
    }
    let g = flow.group();
    let inside: BTreeSet<Perm> = g.subgroup(h.to_vec())?.elements()?.iter().cloned().collect();
    let mut scanned = 0;
    for (i, e) in g.elements()?.iter().enumerate() {
        if inside.contains(e) {
            continue;
        }
        scanned += 1;
        if base.iter().any(|&p| flow.act_index(i, p) == p) {
            return Ok(MaximalFixCheck { outcome: MaximalFix::Extendable(e.clone()), elements_scanned: scanned });
        }
    }
    Ok(MaximalFixCheck { outcome: MaximalFix::Maximal, elements_scanned: scanned })
}
