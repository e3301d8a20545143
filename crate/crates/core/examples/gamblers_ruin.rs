//! The gambler's-ruin expectation: recurrence solve against the closed form.

use maxdyn::params;

fn main() -> maxdyn::Result<()> {
    for (n, b) in [(10, 2), (10, 3), (7, 6), (50, 12)] {
        let e = params::gamblers_ruin_solve(n, b)?;
        let closed = params::gamblers_ruin_closed(n, b)?;
        println!("n={n:>2} b={b:>2}: e_1 = {} (closed form {closed})", e[0]);
    }
    let e = params::gamblers_ruin_solve(10, 5)?;
    let shown: Vec<String> = e.iter().map(ToString::to_string).collect();
    println!("\nn=10 b=5: e_1..e_b = {}", shown.join(", "));
    Ok(())
}
