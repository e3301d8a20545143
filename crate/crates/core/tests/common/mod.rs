#![allow(dead_code)]

use std::collections::BTreeSet;

use itertools::Itertools;
use maxdyn::graph::random_strongly_connected;
use maxdyn::{DirectedGraph, Valuation, VertexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every labelled simple digraph on `n` vertices.
pub fn all_digraphs(n: usize) -> impl Iterator<Item = DirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).cartesian_product(0..n).filter(|(u, v)| u != v).collect();
    let m = pairs.len();
    (0u64..1 << m).map(move |mask| {
        let edges = (0..m).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]);
        DirectedGraph::from_edges(n, edges).unwrap()
    })
}

pub fn all_strongly_connected(n: usize) -> impl Iterator<Item = DirectedGraph> {
    all_digraphs(n).filter(|g| g.is_strongly_connected())
}

/// Every valuation with entries in `[n]`.
pub fn all_valuations(n: usize) -> impl Iterator<Item = Valuation> {
    (0..n)
        .map(|_| 1..=n as u64)
        .multi_cartesian_product()
        .map(|v| Valuation::new(v).unwrap())
}

pub fn random_valuation<R: Rng>(rng: &mut R, n: usize) -> Valuation {
    Valuation::new((0..n).map(|_| rng.random_range(1..=n as u64)).collect()).unwrap()
}

pub fn random_sc<R: Rng>(rng: &mut R, n: usize) -> DirectedGraph {
    let p = if n <= 2 { 1.0 } else { rng.random_range(0.3..0.8) };
    random_strongly_connected(n, p, rng).unwrap()
}

/// Γ⁰ = S and Γᵏ = Γ(Γᵏ⁻¹) minus everything seen so far.
pub fn recursive_levels(g: &DirectedGraph, s: &VertexSet) -> Vec<VertexSet> {
    let mut seen: BTreeSet<usize> = s.iter().collect();
    let mut levels = vec![s.clone()];
    loop {
        let next: VertexSet = levels
            .last()
            .unwrap()
            .iter()
            .flat_map(|u| g.out_neighbors(u).to_vec())
            .filter(|v| !seen.contains(v))
            .collect();
        if next.is_empty() {
            return levels;
        }
        seen.extend(next.iter());
        levels.push(next);
    }
}

/// Vertices on some directed cycle of all-maximum vertices, closed under
/// adding maximum vertices with an edge into the set.
pub fn brute_strong_cycle_set(g: &DirectedGraph, f: &Valuation) -> VertexSet {
    let m = f.max_value();
    let top: Vec<usize> = (0..g.n()).filter(|&v| f.get(v) == m).collect();
    let mut set = BTreeSet::new();
    for k in 2..=top.len() {
        for cycle in top.iter().copied().permutations(k) {
            let closed = (0..k).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % k]));
            if closed {
                set.extend(cycle);
            }
        }
    }
    loop {
        let extra: Vec<usize> = top
            .iter()
            .copied()
            .filter(|v| !set.contains(v) && g.out_neighbors(*v).iter().any(|u| set.contains(u)))
            .collect();
        if extra.is_empty() {
            break;
        }
        set.extend(extra);
    }
    set.into_iter().collect()
}

/// Length of the shortest directed cycle through `v`, by trying every
/// vertex sequence.
pub fn brute_cycle_length(g: &DirectedGraph, v: usize) -> Option<usize> {
    let others: Vec<usize> = (0..g.n()).filter(|&u| u != v).collect();
    (1..=others.len()).find(|&k| {
        others.iter().copied().permutations(k).any(|mid| {
            let walk: Vec<usize> = std::iter::once(v).chain(mid).chain(std::iter::once(v)).collect();
            walk.windows(2).all(|w| g.has_edge(w[0], w[1]))
        })
    }).map(|k| k + 1)
}

/// Vertices holding the maximum with a neighbour also holding it.
pub fn brute_strong_edge_set(g: &DirectedGraph, f: &Valuation) -> VertexSet {
    let m = f.max_value();
    g.edges()
        .filter(|&(u, v)| f.get(u) == m && f.get(v) == m)
        .flat_map(|(u, v)| [u, v])
        .collect()
}
