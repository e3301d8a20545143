mod common;

use common::*;
use maxdyn::estimator::{empirical_worst_case, Strategy};
use maxdyn::markov::{
    build_chain, convergence_time_with, exact_convergence_time, period, worst_case_convergence_time,
    DEFAULT_STATE_CAP,
};
use maxdyn::{ChainMode, DirectedGraph, Family, Valuation};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive, Zero};

#[test]
fn quotient_state_counts_are_ordered_partition_numbers() {
    let g = |n| DirectedGraph::generate(Family::Complete, n).unwrap();
    for (n, expected) in [(1, 1), (2, 3), (3, 13), (4, 75), (5, 541), (6, 4683)] {
        assert_eq!(build_chain(&g(n), ChainMode::Quotient, DEFAULT_STATE_CAP).unwrap().len(), expected);
    }
    assert_eq!(build_chain(&g(4), ChainMode::Raw, DEFAULT_STATE_CAP).unwrap().len(), 256);
}

#[test]
fn chain_rows_are_stochastic() {
    for g in all_strongly_connected(3) {
        for mode in [ChainMode::Raw, ChainMode::Quotient] {
            let chain = build_chain(&g, mode, DEFAULT_STATE_CAP).unwrap();
            for row in chain.transitions.rows() {
                let total: Rational64 = row.iter().map(|(_, p)| *p).sum();
                assert!(total.is_one());
                assert!(row.iter().all(|(_, p)| *p > Rational64::zero()));
            }
        }
    }
}

#[test]
fn disconnected_graphs_can_have_many_absorbing_states() {
    let g = DirectedGraph::from_edges(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
    let chain = build_chain(&g, ChainMode::Raw, DEFAULT_STATE_CAP).unwrap();
    assert!(chain.absorbing_components().len() > 1);
    assert_eq!(period(&g, DEFAULT_STATE_CAP).unwrap(), 1);
    let cycle = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
    assert_eq!(period(&cycle, DEFAULT_STATE_CAP).unwrap(), 1);
}

#[test]
fn float_solver_agrees_with_exact() {
    for family in [Family::Path, Family::Complete, Family::Dicycle] {
        let g = DirectedGraph::generate(family, 5).unwrap();
        let f = Valuation::new(vec![5, 1, 4, 2, 3]).unwrap();
        let exact = convergence_time_with(&g, &f, ChainMode::Quotient, DEFAULT_STATE_CAP, 1000).unwrap();
        let float = convergence_time_with(&g, &f, ChainMode::Quotient, DEFAULT_STATE_CAP, 0).unwrap();
        let e = exact.exact.unwrap().to_f64().unwrap();
        assert!(float.exact.is_none());
        assert!(float.residual < 1e-10);
        assert!((float.value - e).abs() <= 1e-9 * e, "{family}: {} vs {e}", float.value);
    }
}

#[test]
fn empirical_worst_case_finds_a_near_worst_start() {
    let g = DirectedGraph::generate(Family::Path, 5).unwrap();
    let exact = worst_case_convergence_time(&g, DEFAULT_STATE_CAP).unwrap();
    let (f, report) = empirical_worst_case(&g, Strategy::default(), 2000, 10_000, 17).unwrap();
    let t = exact_convergence_time(&g, &f, DEFAULT_STATE_CAP).unwrap().value;
    assert!(t >= 0.9 * exact.worst_value, "picked {f} with T = {t}, worst {}", exact.worst_value);
    assert!(report.mean <= exact.worst_value + 5.0 * report.std_error);
}
