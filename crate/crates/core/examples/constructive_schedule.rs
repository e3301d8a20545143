//! An explicit update order that spreads the maximum to every vertex.

use maxdyn::{dynamics, gallery};

fn main() -> maxdyn::Result<()> {
    let g = gallery::ten_vertex_directed();
    let f = gallery::ten_vertex_valuation();
    let levels = g.dual().k_boundary_partition(&f.argmax())?;
    for (k, level) in levels.iter().enumerate() {
        println!("level {k}: {level}");
    }
    let schedule = dynamics::constructive_schedule(&g, &f)?;
    println!("schedule: {schedule:?}");
    for (step, f) in dynamics::replay_all(&g, &f, &schedule)?.iter().enumerate() {
        println!("{step:>2}: {f}");
    }
    Ok(())
}
