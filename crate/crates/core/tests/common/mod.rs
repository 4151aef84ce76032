#![allow(dead_code)]

use forestcount::{Formula, Graph};
use proptest::prelude::*;

/// A forest on `parents.len() + 1` vertices: vertex `i + 1` hangs below
/// `parents[i] % (i + 1)` unless `cut[i]` is set.
pub fn forest(parents: &[usize], cut: &[bool]) -> Graph {
    let edges: Vec<(usize, usize)> = parents
        .iter()
        .enumerate()
        .filter(|&(i, _)| !cut.get(i).copied().unwrap_or(false))
        .map(|(i, &p)| (p % (i + 1), i + 1))
        .collect();
    Graph::from_edges(parents.len() + 1, &edges).unwrap()
}

pub fn arb_forest(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..max_n).prop_flat_map(|n| {
        (proptest::collection::vec(any::<usize>(), n), proptest::collection::vec(prop::bool::weighted(0.15), n))
            .prop_map(|(p, c)| forest(&p, &c))
    })
}

pub fn arb_tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..max_n).prop_flat_map(|n| proptest::collection::vec(any::<usize>(), n).prop_map(|p| forest(&p, &[])))
}

/// Simple graph on `n` vertices from a list of candidate edges.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            let edges: Vec<(usize, usize)> = pairs.into_iter().filter(|(u, v)| u != v).collect();
            Graph::from_edges(n, &edges).unwrap()
        })
    })
}

/// Random formulas over parameters `a1..a{params}` with constants up to
/// `max_k`.
pub fn arb_formula(params: u32, max_k: u32) -> impl Strategy<Value = Formula> {
    let leaf = (0..=max_k, 1..=params).prop_map(|(k, p)| Formula::atom(k, p));
    leaf.prop_recursive(3, 10, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::negate),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Formula::And),
            proptest::collection::vec(inner, 2..=3).prop_map(Formula::Or),
        ]
    })
}

/// Vertices of the regular tree ball in BFS order are numbered so that the
/// first `ball_size(d, r)` of them are exactly the ball of radius `r`.
pub fn ball_size(d: usize, r: usize) -> usize {
    let mut total = 1;
    let mut layer = d;
    for _ in 0..r {
        total += layer;
        layer *= d - 1;
    }
    total
}
