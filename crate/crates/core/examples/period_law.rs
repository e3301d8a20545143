//! Periods of small graphs, including a weakly connected one whose absorbing
//! states are not constant.

use maxdyn::markov::{self, ChainMode};
use maxdyn::{gallery, DirectedGraph, Family};

fn main() -> maxdyn::Result<()> {
    let graphs = [
        ("K_3", DirectedGraph::generate(Family::Complete, 3)?),
        ("P_4", DirectedGraph::generate(Family::Path, 4)?),
        ("C_4", DirectedGraph::generate(Family::Dicycle, 4)?),
        ("fork", gallery::rooted_fork()),
    ];
    for (name, g) in &graphs {
        let chain = markov::build_chain(g, ChainMode::Raw, 10_000)?;
        let absorbing = chain.absorbing_states();
        let constant = absorbing.iter().filter(|&s| chain.states[s].is_constant()).count();
        println!(
            "{name:>5}: {} states, period {}, {} absorbing states ({} constant)",
            chain.len(),
            chain.period(),
            absorbing.len(),
            constant
        );
    }
    let fork = gallery::rooted_fork();
    let f = gallery::rooted_fork_valuation();
    println!(
        "\nfork from {f}: constant reachable = {}",
        markov::verify_path_to_constant(&fork, &f, 100)?
    );
    Ok(())
}
