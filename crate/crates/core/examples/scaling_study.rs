//! Convergence-time growth on paths and complete graphs, as CSV.
//!
//! Pass sizes as arguments, e.g. `cargo run --release --example scaling_study 8 16 32`.

use maxdyn::estimator;
use maxdyn::Family;

fn main() -> maxdyn::Result<()> {
    let ns: Vec<usize> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let ns = if ns.is_empty() { vec![8, 16, 32] } else { ns };
    let mut rows = estimator::scaling_study(Family::Path, &ns, 2000, 1, None)?;
    rows.extend(estimator::scaling_study(Family::Complete, &ns, 2000, 1, None)?);
    print!("{}", estimator::scaling_csv(&rows));
    Ok(())
}
