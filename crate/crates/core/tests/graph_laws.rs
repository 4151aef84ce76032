mod common;

use common::{arb_forest, arb_graph};
use forestcount::graph::Distance;
use forestcount::treegen::{complete_graph, cycle_graph, lift, named_graph};
use forestcount::{Girth, Graph, VertexSet};
use proptest::prelude::*;

/// Girth by checking, for every edge, the shortest detour around it.
fn girth_by_edge_removal(g: &Graph) -> Option<usize> {
    let mut best = None;
    for (u, v) in g.edges() {
        let without: Vec<(usize, usize)> = g.edges().into_iter().filter(|&e| e != (u, v)).collect();
        let h = Graph::from_edges(g.n(), &without).unwrap();
        if let Distance::Finite(d) = h.dist(u, v) {
            best = Some(best.map_or(d + 1, |b: usize| b.min(d + 1)));
        }
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_is_a_metric(g in arb_graph(12), a in 0usize..12, b in 0usize..12, c in 0usize..12) {
        let n = g.n();
        let (a, b, c) = (a % n, b % n, c % n);
        prop_assert_eq!(g.dist(a, b), g.dist(b, a));
        prop_assert_eq!(g.dist(a, a), Distance::Finite(0));
        if let (Distance::Finite(x), Distance::Finite(y)) = (g.dist(a, b), g.dist(b, c)) {
            let z = g.dist(a, c).finite().expect("reachability is transitive");
            prop_assert!(z <= x + y);
        }
    }

    #[test]
    fn handshake(g in arb_graph(15)) {
        let degree_sum: usize = (0..g.n()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(degree_sum, 2 * g.edge_count());
    }

    #[test]
    fn girth_matches_edge_removal(g in arb_graph(10)) {
        let expected = girth_by_edge_removal(&g);
        match g.girth(None) {
            Girth::Finite(x) => prop_assert_eq!(Some(x), expected),
            Girth::Infinite => prop_assert_eq!(None, expected),
            Girth::AboveCutoff(_) => prop_assert!(false, "no cutoff given"),
        }
        // a cutoff never hides a cycle at or below it
        if let Some(x) = expected {
            prop_assert!(!g.girth(Some(x)).exceeds(x));
            prop_assert!(g.girth(Some(x.saturating_sub(1))).exceeds(x.saturating_sub(1)));
        }
    }

    #[test]
    fn girth_is_relabel_invariant(g in arb_graph(10), seed in any::<u64>()) {
        let n = g.n();
        let mut perm: Vec<usize> = (0..n).collect();
        // deterministic shuffle from the seed
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(g.relabel(&perm).girth(None), g.girth(None));
    }

    #[test]
    fn text_round_trip(g in arb_graph(12)) {
        prop_assert_eq!(Graph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn convex_closure_laws(g in arb_forest(20), xs in proptest::collection::vec(0usize..20, 0..5), extra in 0usize..20) {
        let a: VertexSet = xs.iter().map(|x| x % g.n()).collect();
        let hull = g.convex_closure(&a).unwrap();
        prop_assert!(a.is_subset(&hull));
        prop_assert_eq!(g.convex_closure(&hull).unwrap(), hull.clone());
        let mut bigger = a.clone();
        bigger.insert(extra % g.n());
        prop_assert!(hull.is_subset(&g.convex_closure(&bigger).unwrap()));
        // every path between finite-distance hull vertices stays in the hull
        for &u in &hull {
            for &v in &hull {
                if let Ok(path) = g.unique_path(u, v) {
                    prop_assert!(path.iter().all(|w| hull.contains(w)));
                }
            }
        }
    }

    #[test]
    fn lift_preserves_degree_and_doubles_girth(g in arb_graph(7)) {
        prop_assume!(g.edge_count() <= 10);
        let l = lift(&g).unwrap();
        prop_assert_eq!(l.n(), g.n() << g.edge_count());
        for v in 0..l.n() {
            prop_assert_eq!(l.degree(v), g.degree(v >> g.edge_count()));
        }
        match g.girth(None) {
            Girth::Finite(x) => prop_assert_eq!(l.girth(None), Girth::Finite(2 * x)),
            other => prop_assert_eq!(l.girth(None), other),
        }
    }
}

#[test]
fn lift_of_cycles_and_fixtures() {
    for n in 3..=6 {
        let l = lift(&cycle_graph(n)).unwrap();
        assert_eq!(l.girth(None), Girth::Finite(2 * n));
        assert_eq!(l.regular_degree(), Some(2));
    }
    let l = lift(&complete_graph(5)).unwrap();
    assert_eq!(l.n(), 5 * 1024);
    assert_eq!(l.regular_degree(), Some(4));
    assert_eq!(l.girth(Some(8)), Girth::Finite(6));

    let hea = named_graph("heawood").unwrap();
    assert_eq!(hea.girth(None), Girth::Finite(6));
    assert_eq!(hea.n(), 14);
}
