//! Coupled Bernoulli sequences: the faster process never finishes later.

use maxdyn::estimator;
use maxdyn::RngStream;

fn main() -> maxdyn::Result<()> {
    let mut rng = RngStream::new(3);
    let record = estimator::coupling_trial(0.1, &[0.5, 0.3], &mut rng, 1000)?;
    println!("one trial: Q = {:?}, P' = {:?}", record.q_first, record.p_first);
    for (j, (q, p)) in record.rounds.iter().enumerate().take(10) {
        println!("  round {:>2}: Q_j={} P'_j={}", j + 1, u8::from(*q), u8::from(*p));
    }

    let s = estimator::coupling_study(0.1, &[0.5], 100_000, 42, 0.01)?;
    println!(
        "\n{} trials: violations {}, mean P' {:.4} (direct {:.4}), mean Q {:.3}, chi2 p-value {:.3}",
        s.trials, s.dominance_violations, s.mean_p_prime, s.mean_direct, s.mean_q, s.chi_square.p_value
    );
    Ok(())
}
