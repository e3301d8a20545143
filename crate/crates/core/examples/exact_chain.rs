//! Exact expected convergence times from the chain of possibilities.

use maxdyn::estimator::two_top_valuation;
use maxdyn::markov::{self, TransitionMatrix};
use maxdyn::{gallery, DirectedGraph, Family};

fn main() -> maxdyn::Result<()> {
    for family in [Family::Path, Family::Complete] {
        for n in 3..=6 {
            let g = DirectedGraph::generate(family, n)?;
            let t = markov::exact_convergence_time(&g, &two_top_valuation(n)?, markov::DEFAULT_STATE_CAP)?;
            let exact = t.exact.expect("small chains solve exactly");
            println!("{family:>8} n={n}: T = {exact} ({} states)", t.states);
        }
    }

    let p4 = DirectedGraph::generate(Family::Path, 4)?;
    let worst = markov::worst_case_convergence_time(&p4, 1000)?;
    println!(
        "\nworst start on the 4-path: {} with T = {}",
        worst.worst_valuation,
        worst.worst_exact.expect("exact")
    );

    let chain = TransitionMatrix::from_triples(8, &gallery::eight_state_chain())?;
    for comp in chain.absorbing_components() {
        let names: Vec<&str> = comp.iter().map(|s| gallery::EIGHT_STATE_NAMES[s]).collect();
        println!("absorbing component {names:?}");
    }
    println!("period of the eight-state chain: {}", chain.period());
    Ok(())
}
