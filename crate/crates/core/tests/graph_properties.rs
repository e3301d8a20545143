mod common;

use common::*;
use maxdyn::{DirectedGraph, Valuation, VertexSet};
use proptest::prelude::*;
use rand::Rng;

fn nonempty_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
}

#[test]
fn k_boundaries_match_recursive_definition_exhaustively() {
    for n in 1..=4 {
        for g in all_strongly_connected(n) {
            for s in nonempty_subsets(n) {
                let levels = g.k_boundary_partition(&s).unwrap();
                assert_eq!(levels, recursive_levels(&g, &s), "graph {g:?}, S = {s}");
                let total: usize = levels.iter().map(VertexSet::len).sum();
                assert_eq!(total, n);
            }
        }
    }
}

#[test]
fn k_boundaries_match_on_random_larger_graphs() {
    let mut r = rng(11);
    for _ in 0..300 {
        let n = r.random_range(5..=9);
        let g = random_sc(&mut r, n);
        let s: VertexSet = (0..n).filter(|_| r.random_bool(0.3)).collect();
        let s = if s.is_empty() { VertexSet::from([0]) } else { s };
        assert_eq!(g.k_boundary_partition(&s).unwrap(), recursive_levels(&g, &s));
    }
}

#[test]
fn scc_components_are_maximal_and_condensation_acyclic() {
    let reach = |g: &DirectedGraph, u: usize, v: usize| g.bfs_distances([u])[v].is_some();
    for g in all_digraphs(3).chain(all_digraphs(4).step_by(7)) {
        let scc = g.scc();
        let n = g.n();
        for u in 0..n {
            for v in 0..n {
                let same = scc.component_of[u] == scc.component_of[v];
                assert_eq!(same, reach(&g, u, v) && reach(&g, v, u));
            }
        }
        for &(a, b) in &scc.condensation_edges {
            assert!(a > b, "condensation edges point towards sinks");
        }
    }
}

#[test]
fn canonicalization_on_seeded_valuations() {
    let mut r = rng(5);
    for _ in 0..100_000 {
        let n = r.random_range(1..=9);
        let values: Vec<u64> = (0..n).map(|_| r.random_range(1..=1_000_000)).collect();
        let f = Valuation::new(values.clone()).unwrap();
        let c = f.canonicalize();
        let mut distinct = values.clone();
        distinct.sort_unstable();
        distinct.dedup();
        for (v, x) in values.iter().enumerate() {
            let rank = distinct.iter().filter(|&&d| d <= *x).count() as u64;
            assert_eq!(c.get(v), rank);
        }
        assert!(c.is_canonical());
        assert_eq!(c.canonicalize(), c);
        assert!(c.max_value() as usize <= n);
    }
}

fn edge_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
    (2usize..9).prop_flat_map(|n| {
        let pair = (0..n, 0..n).prop_filter("no loops", |(u, v)| u != v);
        (Just(n), proptest::collection::vec(pair, 0..30))
    })
}

proptest! {
    #[test]
    fn dual_is_an_involution((n, edges) in edge_strategy()) {
        let g = DirectedGraph::from_edges(n, edges).unwrap();
        let d = g.dual();
        prop_assert_eq!(d.dual(), g.clone());
        prop_assert_eq!(d.is_strongly_connected(), g.is_strongly_connected());
        prop_assert_eq!(d.edge_count(), g.edge_count());
        for (u, v) in g.edges() {
            prop_assert!(d.has_edge(v, u));
        }
    }

    #[test]
    fn edge_list_round_trip((n, edges) in edge_strategy()) {
        let g = DirectedGraph::from_edges(n, edges).unwrap();
        let back = DirectedGraph::parse_edge_list(&g.to_edge_list()).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn order_equivalence_is_reflexive_and_symmetric(values in proptest::collection::vec(1u64..6, 4)) {
        let g = DirectedGraph::generate(maxdyn::Family::Path, 4).unwrap();
        let f = Valuation::new(values).unwrap();
        let rev = Valuation::new(f.values().iter().rev().copied().collect()).unwrap();
        prop_assert!(maxdyn::valuation::order_equivalent(&g, &f, &f.canonicalize(), 24).unwrap());
        let ab = maxdyn::valuation::order_equivalent(&g, &f, &rev, 24).unwrap();
        let ba = maxdyn::valuation::order_equivalent(&g, &rev, &f, 24).unwrap();
        prop_assert!(ab && ba, "path reversal is an automorphism");
    }
}
