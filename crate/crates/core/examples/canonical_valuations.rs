//! Rank compression and order equivalence of valuations.

use maxdyn::valuation::{self, canonical_count, enumerate_canonical};
use maxdyn::gallery;

fn main() -> maxdyn::Result<()> {
    let g = gallery::four_vertex_undirected();
    let f = gallery::four_vertex_scaled_reals();
    let h = gallery::four_vertex_increasing();
    println!("{f} -> {}", f.canonicalize());
    println!(
        "equivalent to {h} under an automorphism: {}",
        valuation::order_equivalent(&g, &f, &h, 1000)?
    );

    for n in 1..=6 {
        println!("n={n}: {} canonical valuations", canonical_count(n));
    }
    let three: Vec<String> = enumerate_canonical(3, 6)?.map(|v| v.to_string()).collect();
    println!("n=3: [{}]", three.join("] ["));
    Ok(())
}
