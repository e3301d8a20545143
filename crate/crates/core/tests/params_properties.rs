mod common;

use common::*;
use maxdyn::graph::random_connected_undirected;
use maxdyn::params::{
    bound_report, gamblers_ruin_closed, gamblers_ruin_solve, harmonic, orbit, orbit_per_vertex,
    vertex_expansion_in, vertex_expansion_out,
};
use maxdyn::{DirectedGraph, Family};
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use rand::Rng;

fn brute_expansion(g: &DirectedGraph) -> Rational64 {
    let n = g.n();
    (1u32..1 << n)
        .filter(|m| m.count_ones() as usize <= n / 2)
        .map(|mask| {
            let inside = |v: usize| mask >> v & 1 == 1;
            let boundary = (0..n)
                .filter(|&v| !inside(v) && (0..n).any(|u| inside(u) && g.has_edge(u, v)))
                .count();
            Rational64::new(boundary as i64, mask.count_ones() as i64)
        })
        .min()
        .unwrap()
}

#[test]
fn expansion_matches_subset_oracle() {
    let mut r = rng(101);
    for _ in 0..200 {
        let n = r.random_range(2..=11);
        let g = random_sc(&mut r, n);
        let out = vertex_expansion_out(&g).unwrap();
        assert_eq!(out.value, brute_expansion(&g));
        assert_eq!(vertex_expansion_in(&g).unwrap().value, brute_expansion(&g.dual()));
        let w = &out.witness;
        assert!(!w.is_empty() && w.len() <= n / 2);
        assert_eq!(Rational64::new(g.boundary(w).unwrap().len() as i64, w.len() as i64), out.value);
        let report = bound_report(&g).unwrap();
        assert_eq!(report.phi_prime, report.phi_out.value.min(report.phi_in.value));
    }
}

#[test]
fn orbit_matches_cycle_enumeration() {
    let mut r = rng(102);
    for _ in 0..200 {
        let n = r.random_range(2..=6);
        let g = random_sc(&mut r, n);
        let per_vertex = orbit_per_vertex(&g).unwrap();
        for (v, &b) in per_vertex.iter().enumerate() {
            assert_eq!(Some(b), brute_cycle_length(&g, v));
        }
        let (b, w) = orbit(&g).unwrap();
        assert_eq!(b, *per_vertex.iter().max().unwrap());
        assert_eq!(w, per_vertex.iter().position(|&x| x == b).unwrap());
    }
}

#[test]
fn bidirected_graphs_have_orbit_two() {
    let mut r = rng(103);
    for _ in 0..100 {
        let n = r.random_range(2..=12);
        let g = random_connected_undirected(n, 0.3, &mut r).unwrap();
        assert_eq!(orbit(&g).unwrap().0, 2);
    }
}

#[test]
fn dicycle_orbit_is_its_length() {
    for n in 3..=12 {
        let g = DirectedGraph::generate(Family::Dicycle, n).unwrap();
        assert_eq!(orbit(&g).unwrap(), (n, 0));
    }
}

#[test]
fn complete_graph_reference_sits_between_log_bounds() {
    for n in 10u64..=400 {
        let value = BigRational::from_integer(n.into()) * harmonic(n - 2);
        let value = value.to_f64().unwrap();
        let nlogn = n as f64 * (n as f64).ln();
        assert!(value >= 0.868 * nlogn && value <= 2.0 * nlogn, "n = {n}");
    }
}

#[test]
fn ruin_recurrence_matches_closed_form() {
    for n in 2..=30 {
        for b in 2..=15 {
            let e = gamblers_ruin_solve(n, b).unwrap();
            assert_eq!(e.len(), b as usize);
            assert_eq!(e[0], gamblers_ruin_closed(n, b).unwrap());
            assert!(e.windows(2).all(|w| w[0] > w[1]));
        }
    }
}
