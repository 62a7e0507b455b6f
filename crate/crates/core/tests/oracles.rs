use std::collections::HashSet;
use std::sync::Arc;

use fraisse_core::classes::{audit_extension_property, build_limit_approx, Builtin, ClassSpec};
use fraisse_core::expansions::{locally_invariant_orderings, LinearOrdering};
use fraisse_core::ramsey::{find_ramsey_witness, DEFAULT_BUDGET};
use fraisse_core::report::Verdict;
use fraisse_core::structures::builders::{chain, complete_graph, cycle_graph, graph, path_graph, pure_set};
use fraisse_core::structures::{
    are_isomorphic, canonical_form, copies_of, enumerate_structures, find_embeddings, is_embedding, EmbeddingMap,
    Signature, Structure, Symbol,
};
use itertools::Itertools;

fn all_relations(sig: &Arc<Signature>, n: usize) -> Vec<Structure> {
    let slots: Vec<(usize, Vec<usize>)> = (0..sig.len())
        .flat_map(|s| {
            (0..sig.arity(s)).map(|_| 0..n).multi_cartesian_product().map(move |t| (s, t))
        })
        .collect();
    let slots = if slots.is_empty() && n == 0 { vec![] } else { slots };
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let tuples = slots.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, t)| t.clone());
        out.push(Structure::from_tuples(sig.clone(), n, tuples).unwrap());
    }
    out
}

fn automorphism_count(s: &Structure) -> usize {
    (0..s.size()).permutations(s.size()).filter(|p| s.permuted(p).unwrap() == *s).count()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn enumeration_matches_labeled_counts() {
    let sigs = [
        Signature::new(vec![Symbol::new("E", 2)], None).unwrap().shared(),
        Signature::new(vec![Symbol::new("P", 1), Symbol::new("Q", 1)], None).unwrap().shared(),
        Signature::new(vec![Symbol::new("P", 1), Symbol::new("R", 2)], None).unwrap().shared(),
    ];
    for sig in &sigs {
        let top = if sig.len() == 2 && sig.arity(1) == 2 { 2 } else { 3 };
        for n in 0..=top {
            let reps = enumerate_structures(sig, n, None);
            let labeled: usize = reps.iter().map(|r| factorial(n) / automorphism_count(r)).sum();
            assert_eq!(labeled, all_relations(sig, n).len(), "{sig:?} n={n}");
            for (x, y) in reps.iter().tuple_combinations() {
                assert!(!are_isomorphic(x, y).unwrap());
            }
        }
    }
}

#[test]
fn graph_enumeration_matches_labeled_counts() {
    let sig = Arc::new(Signature::graph());
    for n in 0..=4 {
        let reps = fraisse_core::classes::ClassSpec::builtin(Builtin::Graphs).members(n);
        let labeled: usize = reps.iter().map(|r| factorial(n) / automorphism_count(r)).sum();
        assert_eq!(labeled, 1 << (n * n.saturating_sub(1) / 2));
        let forms: HashSet<_> = reps.iter().map(canonical_form).collect();
        assert_eq!(forms.len(), reps.len());
        assert!(reps.iter().all(|r| r.signature() == &sig));
    }
}

fn brute_force_copies(a: &Structure, c: &Structure) -> Vec<Vec<usize>> {
    (0..c.size())
        .combinations(a.size())
        .filter(|subset| {
            let sub = c.induced_substructure(subset).unwrap();
            (0..a.size()).permutations(a.size()).any(|p| a.permuted(&p).unwrap() == sub)
        })
        .collect()
}

#[test]
fn copies_match_subset_scan() {
    let hosts = [path_graph(5), cycle_graph(5), complete_graph(4), graph(6, &[(0, 1), (1, 2), (3, 4), (2, 5), (0, 5)])];
    let patterns = [graph(2, &[]), complete_graph(2), path_graph(3), graph(3, &[(0, 1)]), complete_graph(3)];
    for c in &hosts {
        for a in &patterns {
            let mut got = copies_of(a, c).unwrap();
            got.sort();
            assert_eq!(got, brute_force_copies(a, c), "{a:?} in {c:?}");
        }
    }
}

#[test]
fn embeddings_are_embeddings_and_complete() {
    let hosts = [path_graph(4), cycle_graph(5), complete_graph(4)];
    let patterns = [complete_graph(2), path_graph(3), graph(2, &[])];
    for b in &hosts {
        for a in &patterns {
            let found = find_embeddings(a, b).unwrap();
            for m in &found {
                assert!(is_embedding(&EmbeddingMap { source: a, target: b, map: m.clone() }).unwrap());
            }
            let brute = (0..b.size())
                .permutations(a.size())
                .filter(|m| is_embedding(&EmbeddingMap { source: a, target: b, map: m.clone() }).unwrap())
                .count();
            assert_eq!(found.len(), brute);
        }
    }
}

/// All isomorphisms between induced substructures of `d`, as point pairs.
fn partial_automorphisms(d: &Structure) -> Vec<Vec<(usize, usize)>> {
    let n = d.size();
    let mut out = Vec::new();
    for k in 0..=n {
        for dom in (0..n).combinations(k) {
            let sub = d.induced_substructure(&dom).unwrap();
            for img in (0..n).permutations(k) {
                if is_embedding(&EmbeddingMap { source: &sub, target: d, map: img.clone() }).unwrap() {
                    out.push(dom.iter().copied().zip(img.iter().copied()).collect());
                }
            }
        }
    }
    out
}

fn oracle_invariant_orderings(d: &Structure) -> Vec<LinearOrdering> {
    let partials = partial_automorphisms(d);
    LinearOrdering::all(d.size())
        .filter(|o| {
            let r = o.ranks();
            partials.iter().all(|p| {
                p.iter().tuple_combinations().all(|(&(a, fa), &(b, fb))| (r[a] < r[b]) == (r[fa] < r[fb]))
            })
        })
        .collect()
}

#[test]
fn invariant_orderings_match_partial_automorphism_scan() {
    let mut cases = vec![chain(2), chain(3), chain(4), chain(5), pure_set(3), pure_set(4)];
    cases.extend([path_graph(4), complete_graph(3), graph(4, &[(0, 1)]), graph(5, &[(0, 1), (1, 2), (3, 4)])]);
    cases.push(
        Structure::new(
            Arc::new(Signature::new(vec![Symbol::new("P", 1)], None).unwrap()),
            3,
            [("P", vec![vec![0]])],
        )
        .unwrap(),
    );
    for d in &cases {
        let got = locally_invariant_orderings(d).unwrap();
        assert_eq!(got.orderings, oracle_invariant_orderings(d), "{d:?}");
    }
}

/// Independent check of the level-2 extension property for a graph: some
/// vertex exists, and every vertex has a neighbour and a non-neighbour.
fn graph_level_two_extension(f: &Structure) -> bool {
    let n = f.size();
    n > 0 && (0..n).all(|v| (0..n).any(|w| w != v && f.holds(0, &[v, w])) && (0..n).any(|w| w != v && !f.holds(0, &[v, w])))
}

#[test]
fn graph_limit_passes_independent_audit() {
    let k = ClassSpec::builtin(Builtin::Graphs);
    let l = build_limit_approx(&k, 2, 12).unwrap();
    assert!(l.closed);
    assert!(graph_level_two_extension(&l.carrier));
    assert!(audit_extension_property(&k, &l.carrier, 2).is_none());
    assert!(!graph_level_two_extension(&complete_graph(4)));
    assert!(audit_extension_property(&k, &complete_graph(4), 2).is_some());
}

/// Whether every 2-colouring of pairs of an `n`-chain has a
/// monochromatic triple, by scanning all colourings.
fn every_pair_colouring_has_mono_triple(n: usize) -> bool {
    let pairs: Vec<(usize, usize)> = (0..n).tuple_combinations().collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    let triples: Vec<[usize; 3]> = (0..n)
        .tuple_combinations()
        .map(|(a, b, c)| [index(a, b), index(a, c), index(b, c)])
        .collect();
    (0u32..(1 << pairs.len())).all(|mask| {
        triples.iter().any(|t| {
            let bits = t.map(|i| mask >> i & 1);
            bits[0] == bits[1] && bits[1] == bits[2]
        })
    })
}

#[test]
fn chain_ramsey_matches_colouring_scan() {
    let k = ClassSpec::builtin(Builtin::LinearOrders);
    let search = find_ramsey_witness(&k, &chain(2), &chain(3), 2, 7, DEFAULT_BUDGET).unwrap();
    assert_eq!(search.verdict, Verdict::True);
    let w = search.witness.unwrap();
    assert_eq!(w.size(), 6);
    for n in 3..=6 {
        assert_eq!(every_pair_colouring_has_mono_triple(n), n >= w.size());
    }
}
