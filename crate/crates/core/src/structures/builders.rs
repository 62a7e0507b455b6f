//! Small constructors for the structures that keep coming up in tests and
//! fixtures. Ordered structures always use the natural order `0 < 1 < ... < n-1`.

use std::sync::Arc;

use super::{Signature, Structure};

pub fn pure_set(n: usize) -> Structure {
    Structure::blank(Arc::new(Signature::empty()), n)
}

/// The chain `0 < 1 < ... < n-1`.
pub fn chain(n: usize) -> Structure {
    let mut s = Structure::blank(Arc::new(Signature::linear_order()), n);
    fill_natural_order(&mut s, 0);
    s
}

/// Undirected graph; each edge is stored in both directions.
pub fn graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::blank(Arc::new(Signature::graph()), n);
    for &(a, b) in edges {
        assert!(a != b && a < n && b < n, "bad edge ({a}, {b})");
        s.set(0, &[a, b], true);
        s.set(0, &[b, a], true);
    }
    s
}

pub fn complete_graph(n: usize) -> Structure {
    let edges: Vec<_> = (0..n).flat_map(|a| ((a + 1)..n).map(move |b| (a, b))).collect();
    graph(n, &edges)
}

pub fn path_graph(n: usize) -> Structure {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    graph(n, &edges)
}

pub fn cycle_graph(n: usize) -> Structure {
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    if n > 2 {
        edges.push((n - 1, 0));
    }
    graph(n, &edges)
}

/// Graph on `0..n` with the natural order added.
pub fn ordered_graph(n: usize, edges: &[(usize, usize)]) -> Structure {
    let mut s = Structure::blank(Arc::new(Signature::ordered_graph()), n);
    fill_natural_order(&mut s, 0);
    for &(a, b) in edges {
        assert!(a != b && a < n && b < n, "bad edge ({a}, {b})");
        s.set(1, &[a, b], true);
        s.set(1, &[b, a], true);
    }
    s
}

/// Tournament given by its arcs `a -> b`.
pub fn tournament(n: usize, arcs: &[(usize, usize)]) -> Structure {
    let mut s = Structure::blank(Arc::new(Signature::tournament()), n);
    for &(a, b) in arcs {
        s.set(0, &[a, b], true);
    }
    s
}

fn fill_natural_order(s: &mut Structure, sym: usize) {
    let n = s.size();
    for a in 0..n {
        for b in (a + 1)..n {
            s.set(sym, &[a, b], true);
        }
    }
}
