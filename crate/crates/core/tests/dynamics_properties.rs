mod common;

use common::*;
use maxdyn::dynamics::{
    constructive_schedule, is_absorbing, max_min_chain, replay_all, simulate, step, strong_cycle_set,
    strong_edge_set, FastRunner,
};
use maxdyn::graph::random_connected_undirected;
use maxdyn::{DirectedGraph, Family, RngStream, Valuation};
use rand::Rng;

#[test]
fn strong_cycle_set_matches_brute_force_on_small_graphs() {
    for n in 1..=3 {
        for g in all_digraphs(n) {
            for f in all_valuations(n) {
                assert_eq!(strong_cycle_set(&g, &f), brute_strong_cycle_set(&g, &f), "{g:?} {f}");
            }
        }
    }
    for g in all_strongly_connected(4) {
        for f in all_valuations(4) {
            assert_eq!(strong_cycle_set(&g, &f), brute_strong_cycle_set(&g, &f), "{g:?} {f}");
        }
    }
}

#[test]
fn strong_cycle_set_matches_brute_force_at_five() {
    let mut r = rng(21);
    for _ in 0..2000 {
        let g = if r.random_bool(0.5) {
            random_sc(&mut r, 5)
        } else {
            let edges: Vec<_> = (0..5)
                .flat_map(|u| (0..5).map(move |v| (u, v)))
                .filter(|(u, v)| u != v)
                .filter(|_| r.random_bool(0.35))
                .collect();
            DirectedGraph::from_edges(5, edges).unwrap()
        };
        let values = (0..5).map(|_| r.random_range(1..=2)).collect();
        let f = Valuation::new(values).unwrap();
        assert_eq!(strong_cycle_set(&g, &f), brute_strong_cycle_set(&g, &f));
    }
}

#[test]
fn absorbing_iff_constant_on_strongly_connected() {
    for n in 2..=4 {
        for g in all_strongly_connected(n) {
            for f in all_valuations(n) {
                assert_eq!(is_absorbing(&g, &f), f.is_constant(), "{g:?} {f}");
            }
        }
    }
}

#[test]
fn strong_edge_set_matches_definition() {
    let mut r = rng(8);
    for _ in 0..500 {
        let n = r.random_range(2..=10);
        let g = random_connected_undirected(n, 0.4, &mut r).unwrap();
        let f = random_valuation(&mut r, n);
        assert_eq!(strong_edge_set(&g, &f).unwrap(), brute_strong_edge_set(&g, &f));
    }
    let directed = DirectedGraph::generate(Family::Dicycle, 4).unwrap();
    assert!(strong_edge_set(&directed, &Valuation::constant(4, 1).unwrap()).is_err());
}

#[test]
fn strong_cycle_vertices_keep_the_maximum() {
    let mut r = rng(31);
    for trial in 0..300 {
        let n = r.random_range(2..=9);
        let g = random_sc(&mut r, n);
        let f = random_valuation(&mut r, n);
        let traj = simulate(&g, &f, &mut RngStream::for_trial(3, trial), 20_000).unwrap();
        let mut states = vec![f.clone()];
        states.extend(traj.rounds.iter().map(|r| r.valuation.clone().unwrap()));
        for (t, ft) in states.iter().enumerate() {
            let c = strong_cycle_set(&g, ft);
            for later in &states[t..] {
                for v in c.iter() {
                    assert_eq!(later.get(v), ft.max_value());
                }
            }
        }
    }
}

#[test]
fn potentials_agree_on_bidirected_graphs() {
    let mut r = rng(41);
    for trial in 0..300 {
        let n = r.random_range(2..=10);
        let g = random_connected_undirected(n, 0.4, &mut r).unwrap();
        let f = random_valuation(&mut r, n);
        let traj = simulate(&g, &f, &mut RngStream::for_trial(4, trial), 20_000).unwrap();
        assert_eq!(traj.initial_g, Some(traj.initial_h));
        for round in &traj.rounds {
            assert_eq!(round.g, Some(round.h));
        }
    }
}

#[test]
fn complete_graph_gains_a_strong_edge_in_one_round() {
    for n in 2..=6 {
        let g = DirectedGraph::generate(Family::Complete, n).unwrap();
        for f in all_valuations(n).filter(|f| strong_edge_set(&g, f).unwrap().is_empty()) {
            for v in 0..n {
                let next = step(&g, &f, v).unwrap();
                assert!(!strong_edge_set(&g, &next).unwrap().is_empty(), "{f} updating {v}");
            }
        }
        let f = maxdyn::estimator::two_top_valuation(n).unwrap();
        assert_eq!(strong_edge_set(&g, &f).unwrap().len(), 2);
    }
}

#[test]
fn fast_runner_agrees_with_recorded_simulation() {
    let mut r = rng(51);
    for trial in 0..400 {
        let n = r.random_range(2..=12);
        let g = random_sc(&mut r, n);
        let f = random_valuation(&mut r, n);
        let traj = simulate(&g, &f, &mut RngStream::for_trial(9, trial), 100_000).unwrap();
        let fast = FastRunner::new(&g).run(&f, &mut RngStream::for_trial(9, trial), 100_000);
        assert!(fast.absorbed);
        assert_eq!(traj.converged_at, Some(fast.rounds));
    }
}

#[test]
fn replay_reproduces_a_simulated_trajectory() {
    let g = DirectedGraph::generate(Family::Path, 7).unwrap();
    let f = Valuation::new(vec![3, 1, 4, 1, 5, 2, 6]).unwrap();
    let traj = simulate(&g, &f, &mut RngStream::new(77), 10_000).unwrap();
    let schedule: Vec<usize> = traj.rounds.iter().map(|r| r.vertex).collect();
    let states = replay_all(&g, &f, &schedule).unwrap();
    for (round, state) in traj.rounds.iter().zip(&states[1..]) {
        assert_eq!(round.valuation.as_ref(), Some(state));
    }
    assert!(states.last().unwrap().is_constant());
}

#[test]
fn constructive_schedule_on_random_graphs() {
    let mut r = rng(61);
    for _ in 0..300 {
        let n = r.random_range(1..=12);
        let g = random_sc(&mut r, n);
        let f = random_valuation(&mut r, n);
        let schedule = constructive_schedule(&g, &f).unwrap();
        assert_eq!(schedule.len(), n - f.argmax().len());
        let end = schedule.iter().fold(f.clone(), |acc, &v| step(&g, &acc, v).unwrap());
        assert_eq!(end, Valuation::constant(n, f.max_value()).unwrap());
    }
}

#[test]
fn max_min_chain_lies_on_a_shortest_cycle() {
    let mut r = rng(71);
    for _ in 0..300 {
        let n = r.random_range(2..=7);
        let g = random_sc(&mut r, n);
        let f = random_valuation(&mut r, n);
        let mm = max_min_chain(&g, &f, 1_000_000).unwrap();
        let k = mm.cycle.len();
        assert!((0..k).all(|i| g.has_edge(mm.cycle[i], mm.cycle[(i + 1) % k])));
        let shortest = f.argmax().iter().filter_map(|v| brute_cycle_length(&g, v)).min();
        assert_eq!(Some(k), shortest);
        assert!(!mm.chain.is_empty());
        assert!(mm.chain.iter().all(|&v| f.get(v) == f.max_value()));
    }
}
