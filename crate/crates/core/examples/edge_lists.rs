//! Writing and reading the edge-list format, and sampling random
//! strongly connected digraphs reproducibly.

use maxdyn::graph::random_strongly_connected;
use maxdyn::{DirectedGraph, RngStream};

fn main() -> maxdyn::Result<()> {
    let mut rng = RngStream::new(12);
    let g = random_strongly_connected(6, 0.3, &mut rng)?;
    let text = g.to_edge_list();
    print!("{text}");
    let back = DirectedGraph::parse_edge_list(&text)?;
    assert_eq!(back, g);
    println!("# round trip ok; strongly connected: {}", back.is_strongly_connected());
    Ok(())
}
