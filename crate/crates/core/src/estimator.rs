//! Monte Carlo estimation of convergence times, tail checks, the coupling
//! harness for stochastic dominance, and scaling studies.
//!
//! Trial `i` of a batch with master seed `s` draws from
//! [`RngStream::for_trial(s, i)`](RngStream::for_trial), so results do not
//! depend on thread count or scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::dynamics::{FastRunner, RngStream, RunOutcome};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Family};
use crate::params;
use crate::valuation::{enumerate_canonical, Valuation, DEFAULT_ENUMERATION_CAP};

/// Default truncation budget, `50 n²` rounds.
pub fn default_max_rounds(n: usize) -> u64 {
    50 * (n as u64) * (n as u64)
}

/// Streams at or above this index are reserved for auxiliary draws (sampled
/// start valuations, direct reference simulations), keeping them disjoint
/// from per-trial streams.
pub const AUX_STREAM_BASE: u64 = 1 << 63;

/// Summary of a batch of independent runs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McReport {
    pub trials: u64,
    pub master_seed: u64,
    pub max_rounds: u64,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
    pub q50: f64,
    pub q90: f64,
    pub q99: f64,
    /// Runs stopped at `max_rounds`. When positive, `mean` is only a lower
    /// bound on the expectation.
    pub truncated_count: u64,
}

impl McReport {
    pub fn from_samples(rounds: &[u64], truncated_count: u64, master_seed: u64, max_rounds: u64) -> Self {
        let trials = rounds.len() as u64;
        let (mean, variance) = mean_variance(rounds);
        let mut sorted = rounds.to_vec();
        sorted.sort_unstable();
        Self {
            trials,
            master_seed,
            max_rounds,
            mean,
            variance,
            std_error: if trials > 0 { (variance / trials as f64).sqrt() } else { 0.0 },
            q50: quantile(&sorted, 0.50),
            q90: quantile(&sorted, 0.90),
            q99: quantile(&sorted, 0.99),
            truncated_count,
        }
    }

    pub fn is_lower_bound_only(&self) -> bool {
        self.truncated_count > 0
    }

    pub const CSV_HEADER: &'static str = "trials,mean,se,q50,q90,q99,truncated";

    pub fn csv_fields(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.trials, self.mean, self.std_error, self.q50, self.q90, self.q99, self.truncated_count
        )
    }
}

/// Sample mean and unbiased sample variance.
fn mean_variance(xs: &[u64]) -> (f64, f64) {
    let n = xs.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = xs.iter().map(|&x| x as f64).sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let ss: f64 = xs.iter().map(|&x| (x as f64 - mean).powi(2)).sum();
    (mean, ss / (n - 1) as f64)
}

/// Nearest-rank quantile of sorted data.
fn quantile(sorted: &[u64], p: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let rank = (p * sorted.len() as f64).ceil().max(1.0) as usize;
    sorted[rank.min(sorted.len()) - 1] as f64
}

/// Runs `trials` independent simulations from `f` and returns each outcome,
/// in trial order.
pub fn mc_samples(
    g: &DirectedGraph,
    f: &Valuation,
    trials: u64,
    max_rounds: u64,
    master_seed: u64,
) -> Result<Vec<RunOutcome>> {
    f.check_for(g)?;
    let runner = FastRunner::new(g);
    Ok((0..trials)
        .into_par_iter()
        .map(|i| runner.run(f, &mut RngStream::for_trial(master_seed, i), max_rounds))
        .collect())
}

pub fn mc_convergence(
    g: &DirectedGraph,
    f: &Valuation,
    trials: u64,
    max_rounds: u64,
    master_seed: u64,
) -> Result<McReport> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let samples = mc_samples(g, f, trials, max_rounds, master_seed)?;
    let rounds: Vec<u64> = samples.iter().map(|s| s.rounds).collect();
    let truncated = samples.iter().filter(|s| !s.absorbed).count() as u64;
    Ok(McReport::from_samples(&rounds, truncated, master_seed, max_rounds))
}

/// Candidate start valuations for [`empirical_worst_case`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Every canonical valuation; `n` must not exceed the cap.
    Enumerate { cap: usize },
    /// `k` valuations with independent uniform entries in `[n]`.
    Sample(usize),
}

impl Default for Strategy {
    fn default() -> Self {
        Strategy::Enumerate {
            cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// Start valuation with the largest Monte Carlo mean. Every candidate uses
/// the same master seed. Ties go to the earlier candidate.
pub fn empirical_worst_case(
    g: &DirectedGraph,
    strategy: Strategy,
    trials: u64,
    max_rounds: u64,
    seed: u64,
) -> Result<(Valuation, McReport)> {
    let n = g.n();
    let candidates: Vec<Valuation> = match strategy {
        Strategy::Enumerate { cap } => enumerate_canonical(n, cap)?.collect(),
        Strategy::Sample(k) => {
            let mut rng = RngStream::for_trial(seed, AUX_STREAM_BASE);
            (0..k.max(1))
                .map(|_| {
                    let values = (0..n).map(|_| rng.random_range(1..=n as u64)).collect();
                    Valuation::new(values).map(|f| f.canonicalize())
                })
                .collect::<Result<_>>()?
        }
    };
    let mut best: Option<(Valuation, McReport)> = None;
    for f in candidates {
        let report = mc_convergence(g, &f, trials, max_rounds, seed)?;
        if best.as_ref().is_none_or(|(_, b)| report.mean > b.mean) {
            best = Some((f, report));
        }
    }
    best.ok_or(Error::EmptyGraph)
}

/// Tail check around the mean at scale `a = (n / φ) ln n · n^ε`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub n: usize,
    pub phi: f64,
    pub epsilon: f64,
    pub a: f64,
    pub mean: f64,
    pub trials: u64,
    /// Fraction of runs with `|rounds - mean| > a`.
    pub tail_fraction: f64,
    /// `1 / n^{2ε}`, the decay the tail should follow up to a constant.
    pub chebyshev_scale: f64,
    /// `max(5 / n^{2ε}, 5 / sqrt(trials))`.
    pub threshold: f64,
    pub truncated_count: u64,
    pub pass: bool,
}

pub fn concentration_check(
    g: &DirectedGraph,
    f: &Valuation,
    trials: u64,
    epsilon: f64,
    max_rounds: u64,
    seed: u64,
) -> Result<ConcentrationReport> {
    if epsilon <= 0.0 {
        return Err(Error::InvalidArgument(format!("epsilon must be positive, got {epsilon}")));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let phi = params::vertex_expansion_out(g)?.value;
    let phi = *phi.numer() as f64 / *phi.denom() as f64;
    if phi == 0.0 {
        return Err(Error::InvalidArgument("vertex expansion is zero".into()));
    }
    let n = g.n() as f64;
    let a = n / phi * n.ln() * n.powf(epsilon);
    let samples = mc_samples(g, f, trials, max_rounds, seed)?;
    let rounds: Vec<u64> = samples.iter().map(|s| s.rounds).collect();
    let (mean, _) = mean_variance(&rounds);
    let tail = rounds.iter().filter(|&&r| (r as f64 - mean).abs() > a).count();
    let tail_fraction = tail as f64 / trials as f64;
    let chebyshev_scale = n.powf(-2.0 * epsilon);
    let threshold = (5.0 * chebyshev_scale).max(5.0 / (trials as f64).sqrt());
    Ok(ConcentrationReport {
        n: g.n(),
        phi,
        epsilon,
        a,
        mean,
        trials,
        tail_fraction,
        chebyshev_scale,
        threshold,
        truncated_count: samples.iter().filter(|s| !s.absorbed).count() as u64,
        pass: tail_fraction <= threshold,
    })
}

/// One realization of the coupled pair of Bernoulli sequences.
///
/// Each round `Q_j` succeeds with probability `q`. `P′_j` succeeds whenever
/// `Q_j` does, and otherwise with probability `(p_j - q) / (1 - q)`, so that
/// `P′_j` succeeds with probability `p_j` overall. `Q` and `P′` are the first
/// success rounds (1-based).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingRecord {
    pub q: f64,
    pub p_sequence: Vec<f64>,
    /// `(Q_j, P′_j)` for every simulated round.
    pub rounds: Vec<(bool, bool)>,
    /// `None` if `Q` did not succeed within the round budget.
    pub q_first: Option<u64>,
    pub p_first: Option<u64>,
}

fn check_coupling(q: f64, p_sequence: &[f64]) -> Result<()> {
    if !(0.0..1.0).contains(&q) {
        return Err(Error::InvalidProbability(format!("q must lie in [0, 1), got {q}")));
    }
    if p_sequence.is_empty() {
        return Err(Error::InvalidProbability("p_sequence is empty".into()));
    }
    if let Some(p) = p_sequence.iter().find(|&&p| !(q..=1.0).contains(&p)) {
        return Err(Error::InvalidProbability(format!("p_j = {p} outside [q, 1] with q = {q}")));
    }
    Ok(())
}

/// `p_j`, repeating the last entry past the end of the sequence.
fn p_at(p_sequence: &[f64], j: usize) -> f64 {
    p_sequence[j.min(p_sequence.len() - 1)]
}

/// Simulates rounds until `Q` succeeds or `max_rounds` pass. `p_sequence`
/// is extended by repeating its last entry.
pub fn coupling_trial(q: f64, p_sequence: &[f64], rng: &mut RngStream, max_rounds: u64) -> Result<CouplingRecord> {
    check_coupling(q, p_sequence)?;
    let mut record = CouplingRecord {
        q,
        p_sequence: p_sequence.to_vec(),
        rounds: Vec::new(),
        q_first: None,
        p_first: None,
    };
    for j in 0..max_rounds {
        let q_j = rng.random::<f64>() < q;
        let p_j = q_j || rng.random::<f64>() < (p_at(p_sequence, j as usize) - q) / (1.0 - q);
        record.rounds.push((q_j, p_j));
        if p_j && record.p_first.is_none() {
            record.p_first = Some(j + 1);
        }
        if q_j {
            record.q_first = Some(j + 1);
            break;
        }
    }
    Ok(record)
}

/// First success of independent Bernoulli(`p_j`) rounds, drawn directly.
pub fn direct_first_success(p_sequence: &[f64], rng: &mut RngStream, max_rounds: u64) -> Result<Option<u64>> {
    check_coupling(0.0, p_sequence)?;
    Ok((0..max_rounds).find(|&j| rng.random::<f64>() < p_at(p_sequence, j as usize)).map(|j| j + 1))
}

/// Pearson chi-square test that two samples come from one distribution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareTest {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Value ranges merged into one bin; the last bin is open-ended.
    pub bins: Vec<(u64, Option<u64>)>,
}

/// Bins are grown left to right until both expected counts reach 5; the
/// remainder is folded into the last bin.
pub fn two_sample_chi_square(a: &[u64], b: &[u64]) -> Result<ChiSquareTest> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidArgument("both samples must be non-empty".into()));
    }
    let top = a.iter().chain(b).copied().max().unwrap_or(0) as usize;
    let mut ca = vec![0u64; top + 1];
    let mut cb = vec![0u64; top + 1];
    a.iter().for_each(|&x| ca[x as usize] += 1);
    b.iter().for_each(|&x| cb[x as usize] += 1);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let total = na + nb;
    let expected_ok = |sa: u64, sb: u64| {
        let pooled = (sa + sb) as f64 / total;
        pooled * na.min(nb) >= 5.0
    };

    let mut bins: Vec<(u64, Option<u64>, u64, u64)> = Vec::new();
    let (mut lo, mut sa, mut sb) = (0u64, 0u64, 0u64);
    for v in 0..=top {
        sa += ca[v];
        sb += cb[v];
        if expected_ok(sa, sb) {
            bins.push((lo, Some(v as u64), sa, sb));
            lo = v as u64 + 1;
            sa = 0;
            sb = 0;
        }
    }
    match bins.last_mut() {
        Some(last) => {
            last.1 = None;
            last.2 += sa;
            last.3 += sb;
        }
        None => bins.push((0, None, sa, sb)),
    }
    let statistic: f64 = bins
        .iter()
        .map(|&(_, _, oa, ob)| {
            let pooled = (oa + ob) as f64 / total;
            let (ea, eb) = (pooled * na, pooled * nb);
            (oa as f64 - ea).powi(2) / ea + (ob as f64 - eb).powi(2) / eb
        })
        .sum();
    let dof = bins.len().saturating_sub(1);
    let p_value = if dof == 0 {
        1.0
    } else {
        let dist = ChiSquared::new(dof as f64).map_err(|e| Error::InvalidArgument(e.to_string()))?;
        1.0 - dist.cdf(statistic)
    };
    Ok(ChiSquareTest {
        statistic,
        dof,
        p_value,
        bins: bins.into_iter().map(|(lo, hi, _, _)| (lo, hi)).collect(),
    })
}

/// Aggregate of many coupling trials compared against direct simulation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingSummary {
    pub q: f64,
    pub p_sequence: Vec<f64>,
    pub trials: u64,
    pub master_seed: u64,
    /// Trials with `P′ > Q`; must be zero.
    pub dominance_violations: u64,
    /// Trials where `Q` hit the round budget.
    pub capped: u64,
    pub mean_p_prime: f64,
    pub se_p_prime: f64,
    pub mean_q: f64,
    pub mean_direct: f64,
    pub chi_square: ChiSquareTest,
    pub significance: f64,
    pub pass: bool,
}

/// Round budget for a single coupling trial.
pub const COUPLING_MAX_ROUNDS: u64 = 1_000_000;

/// Runs `trials` coupled pairs and as many direct simulations of the `P`
/// process, then compares the two `P` samples.
pub fn coupling_study(q: f64, p_sequence: &[f64], trials: u64, master_seed: u64, significance: f64) -> Result<CouplingSummary> {
    check_coupling(q, p_sequence)?;
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let records: Vec<(Option<u64>, Option<u64>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::for_trial(master_seed, i);
            coupling_trial(q, p_sequence, &mut rng, COUPLING_MAX_ROUNDS).map(|r| (r.q_first, r.p_first))
        })
        .collect::<Result<_>>()?;
    let direct: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngStream::for_trial(master_seed, AUX_STREAM_BASE + i);
            direct_first_success(p_sequence, &mut rng, COUPLING_MAX_ROUNDS).map(|x| x.unwrap_or(COUPLING_MAX_ROUNDS))
        })
        .collect::<Result<_>>()?;

    let dominance_violations = records
        .iter()
        .filter(|(qf, pf)| match (qf, pf) {
            (Some(qf), Some(pf)) => pf > qf,
            (Some(_), None) => true,
            _ => false,
        })
        .count() as u64;
    let capped = records.iter().filter(|(qf, _)| qf.is_none()).count() as u64;
    let p_prime: Vec<u64> = records.iter().map(|(_, pf)| pf.unwrap_or(COUPLING_MAX_ROUNDS)).collect();
    let q_first: Vec<u64> = records.iter().map(|(qf, _)| qf.unwrap_or(COUPLING_MAX_ROUNDS)).collect();
    let (mean_p_prime, var_p_prime) = mean_variance(&p_prime);
    let chi_square = two_sample_chi_square(&p_prime, &direct)?;
    Ok(CouplingSummary {
        q,
        p_sequence: p_sequence.to_vec(),
        trials,
        master_seed,
        dominance_violations,
        capped,
        mean_p_prime,
        se_p_prime: (var_p_prime / trials as f64).sqrt(),
        mean_q: mean_variance(&q_first).0,
        mean_direct: mean_variance(&direct).0,
        pass: dominance_violations == 0 && chi_square.p_value >= significance,
        chi_square,
        significance,
    })
}

/// Two adjacent vertices (0 and 1) hold 2, everything else holds 1.
pub fn two_top_valuation(n: usize) -> Result<Valuation> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two vertices".into()));
    }
    let mut values = vec![1; n];
    values[0] = 2;
    values[1] = 2;
    Valuation::new(values)
}

/// Expected rounds from [`two_top_valuation`]: `n (n - 2)` on paths and
/// `n H_{n-2}` on complete graphs.
pub fn reference_time(family: Family, n: usize) -> Option<f64> {
    let nf = n as f64;
    match family {
        Family::Path => Some(nf * (nf - 2.0)),
        Family::Complete => Some(nf * (1..=n.saturating_sub(2)).map(|i| 1.0 / i as f64).sum::<f64>()),
        Family::Dicycle => None,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingRow {
    pub family: Family,
    pub n: usize,
    pub report: McReport,
    /// `mean / (n ln n)`.
    pub ratio_nlogn: f64,
    /// `mean / n²`.
    pub ratio_n2: f64,
    /// `mean / reference_time`, when a reference exists.
    pub ratio_reference: Option<f64>,
}

impl ScalingRow {
    pub const CSV_HEADER: &'static str =
        "family,n,trials,mean,se,q50,q90,q99,truncated,ratio_nlogn,ratio_n2,ratio_reference";

    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{}",
            self.family,
            self.n,
            self.report.csv_fields(),
            self.ratio_nlogn,
            self.ratio_n2,
            self.ratio_reference.map_or_else(String::new, |r| r.to_string())
        )
    }
}

/// Monte Carlo means from [`two_top_valuation`] across sizes. Row `k` uses
/// master seed `seed + k`. `max_rounds` defaults to `50 n²`.
pub fn scaling_study(
    family: Family,
    n_values: &[usize],
    trials: u64,
    seed: u64,
    max_rounds: Option<u64>,
) -> Result<Vec<ScalingRow>> {
    n_values
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let g = DirectedGraph::generate(family, n)?;
            let f = two_top_valuation(n)?;
            let budget = max_rounds.unwrap_or_else(|| default_max_rounds(n));
            let report = mc_convergence(&g, &f, trials, budget, seed.wrapping_add(k as u64))?;
            let nf = n as f64;
            Ok(ScalingRow {
                family,
                n,
                ratio_nlogn: report.mean / (nf * nf.ln()),
                ratio_n2: report.mean / (nf * nf),
                ratio_reference: reference_time(family, n).map(|r| report.mean / r),
                report,
            })
        })
        .collect()
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    std::iter::once(ScalingRow::CSV_HEADER.to_string())
        .chain(rows.iter().map(ScalingRow::to_csv))
        .map(|l| l + "\n")
        .collect()
}
