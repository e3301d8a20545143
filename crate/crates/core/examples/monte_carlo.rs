//! Monte Carlo estimates next to the exact values.

use maxdyn::estimator::{self, two_top_valuation};
use maxdyn::markov;
use maxdyn::{DirectedGraph, Family};

fn main() -> maxdyn::Result<()> {
    let trials = 100_000;
    for family in [Family::Path, Family::Complete] {
        for n in [4, 5] {
            let g = DirectedGraph::generate(family, n)?;
            let f = two_top_valuation(n)?;
            let exact = markov::exact_convergence_time(&g, &f, 10_000)?;
            let mc = estimator::mc_convergence(&g, &f, trials, estimator::default_max_rounds(n), 2024)?;
            println!(
                "{family:>8} n={n}: exact {:>8.4}  mc {:>8.4} +- {:.4}  q90 {}",
                exact.value, mc.mean, mc.std_error, mc.q90
            );
        }
    }
    Ok(())
}
