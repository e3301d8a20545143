//! Replays a fixed update order on the nine-vertex example, then runs a
//! seeded random trajectory and prints the potentials round by round.

use maxdyn::{dynamics, gallery, DirectedGraph, Family, RngStream};

fn main() -> maxdyn::Result<()> {
    let g = gallery::nine_vertex_directed();
    let f0 = gallery::nine_vertex_valuation();
    let replay = dynamics::replay(&g, &f0, &gallery::nine_vertex_schedule())?;
    println!("round  vertex  h  valuation");
    println!("{:>5}  {:>6}  {}  {}", 0, "-", replay.initial_h, f0);
    for r in &replay.rounds {
        let f = r.valuation.as_ref().expect("small graphs keep valuations");
        println!("{:>5}  {:>6}  {}  {}", r.t, r.vertex, r.h, f);
    }

    let p = DirectedGraph::generate(Family::Path, 8)?;
    let f = maxdyn::estimator::two_top_valuation(8)?;
    let mut rng = RngStream::new(7);
    let t = dynamics::simulate(&p, &f, &mut rng, 10_000)?;
    println!(
        "\npath on 8 vertices, seed 7: absorbed after {:?} rounds",
        t.converged_at
    );
    let g_series: Vec<usize> = t.rounds.iter().filter_map(|r| r.g).collect();
    println!("strong edge set sizes: {g_series:?}");
    Ok(())
}
