//! Vertex expansion, orbit and the two bound shapes for a few graphs.

use maxdyn::{gallery, params, DirectedGraph, Family};

fn main() -> maxdyn::Result<()> {
    let graphs = [
        ("K_6", DirectedGraph::generate(Family::Complete, 6)?),
        ("P_6", DirectedGraph::generate(Family::Path, 6)?),
        ("C_5", DirectedGraph::generate(Family::Dicycle, 5)?),
        ("ten-vertex digraph", gallery::ten_vertex_directed()),
        ("nine-vertex digraph", gallery::nine_vertex_directed()),
    ];
    for (name, g) in &graphs {
        let r = params::bound_report(g)?;
        println!(
            "{name:>20}: phi_out={} (A={}) phi_in={} b={} bound_sc={:.1}",
            r.phi_out.value, r.phi_out.witness, r.phi_in.value, r.orbit_b, r.bound_strongly_connected
        );
    }

    println!();
    for n in [4u64, 10, 100] {
        let h = params::harmonic(n);
        println!("H_{n} = {h}");
    }
    Ok(())
}
