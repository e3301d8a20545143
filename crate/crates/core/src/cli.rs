//! The `maxdyn` command line.
//!
//! Every report starts with the fully resolved configuration, so any output
//! can be regenerated from its own header. Exit codes: 0 on success, 1 on a
//! domain error, 2 on a usage error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::dynamics::{self, RngStream, SimulationOptions};
use crate::error::{Error, Result};
use crate::estimator::{self, Strategy};
use crate::graph::{random_strongly_connected, DirectedGraph, Family};
use crate::markov::{self, ChainMode, RationalJson};
use crate::params::{self, HalfRounding};
use crate::valuation::Valuation;

#[derive(Parser, Debug)]
#[command(name = "maxdyn", version, about = "Asynchronous maximum dynamics on directed graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a graph as an edge list
    Gen(Common),
    /// Simulate one trajectory
    Simulate(Common),
    /// Exact expected convergence time from a valuation
    Exact(ExactArgs),
    /// Period of the chain of possibilities
    Period(PeriodArgs),
    /// Vertex expansion, orbit and bound shapes
    Params(ParamsArgs),
    /// Monte Carlo convergence time
    Mc(Common),
    /// Worst-case convergence time over all start valuations
    Worst(WorstArgs),
    /// Monte Carlo means across graph sizes
    Scaling(ScalingArgs),
    /// Constructive update order reaching the constant valuation
    Schedule(Common),
    /// Coupled Bernoulli sequences and the dominance check
    Couple(CoupleArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyArg {
    Complete,
    Path,
    Dicycle,
    RandomSc,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Generated graph family
    #[arg(long, value_enum, conflicts_with = "edges")]
    pub family: Option<FamilyArg>,
    /// Vertex count for --family
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for --family random-sc
    #[arg(long, default_value_t = 0.3)]
    pub p: f64,
    /// Edge-list file ("n m" header, then "u v" lines)
    #[arg(long)]
    pub edges: Option<PathBuf>,
    /// Start valuation: a list like 2,2,1,1, a file, constant:K, or worst
    #[arg(long)]
    pub valuation: Option<String>,
    #[arg(long, env = "MAXDYN_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Round budget per run; defaults to 50 n^2
    #[arg(long)]
    pub max_rounds: Option<u64>,
    /// State budget for chain construction
    #[arg(long, default_value_t = markov::DEFAULT_STATE_CAP)]
    pub cap: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for parallel trials
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ExactArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ModeArg::Quotient)]
    pub mode: ModeArg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct PeriodArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    #[arg(long, value_enum, default_value_t = ModeArg::Raw)]
    pub mode: ModeArg,
    /// Also emit the whole chain
    #[arg(long)]
    pub dump_chain: bool,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Raw,
    Quotient,
}

impl From<ModeArg> for ChainMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Raw => ChainMode::Raw,
            ModeArg::Quotient => ChainMode::Quotient,
        }
    }
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ParamsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Size limit for expansion subsets at odd n
    #[arg(long, value_enum, default_value_t = RoundingArg::Floor)]
    pub rounding: RoundingArg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RoundingArg {
    Floor,
    Ceil,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct WorstArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// exact: solve the quotient chain; mc: Monte Carlo over candidates
    #[arg(long, value_enum, default_value_t = WorstMethod::Exact)]
    pub method: WorstMethod,
    /// For --method mc: sample this many random valuations instead of
    /// enumerating all canonical ones
    #[arg(long)]
    pub sample: Option<usize>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WorstMethod {
    Exact,
    Mc,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct ScalingArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Comma-separated sizes
    #[arg(long, value_delimiter = ',', default_values_t = vec![8usize, 16, 32, 64])]
    pub ns: Vec<usize>,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct CoupleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub common: Common,
    /// Success probability of the dominated sequence
    #[arg(long)]
    pub q: f64,
    /// Comma-separated p_j; the last value repeats
    #[arg(long, value_delimiter = ',', required = true)]
    pub p_seq: Vec<f64>,
    #[arg(long, default_value_t = 0.01)]
    pub significance: f64,
}

/// Parses `argv` and runs; returns the process exit code.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn common(cmd: &Command) -> &Common {
    match cmd {
        Command::Gen(c) | Command::Simulate(c) | Command::Mc(c) | Command::Schedule(c) => c,
        Command::Exact(a) => &a.common,
        Command::Period(a) => &a.common,
        Command::Params(a) => &a.common,
        Command::Worst(a) => &a.common,
        Command::Scaling(a) => &a.common,
        Command::Couple(a) => &a.common,
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Gen(_) => "gen",
        Command::Simulate(_) => "simulate",
        Command::Exact(_) => "exact",
        Command::Period(_) => "period",
        Command::Params(_) => "params",
        Command::Mc(_) => "mc",
        Command::Worst(_) => "worst",
        Command::Scaling(_) => "scaling",
        Command::Schedule(_) => "schedule",
        Command::Couple(_) => "couple",
    }
}

fn config_json(cmd: &Command) -> Value {
    let args = match cmd {
        Command::Gen(c) | Command::Simulate(c) | Command::Mc(c) | Command::Schedule(c) => json!(c),
        Command::Exact(a) => json!(a),
        Command::Period(a) => json!(a),
        Command::Params(a) => json!(a),
        Command::Worst(a) => json!(a),
        Command::Scaling(a) => json!(a),
        Command::Couple(a) => json!(a),
    };
    let mut v = json!({ "command": command_name(cmd) });
    if let (Some(dst), Value::Object(src)) = (v.as_object_mut(), args) {
        dst.extend(src);
    }
    v
}

/// A finished report in all three renderings.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
}

pub fn run(cmd: &Command) -> Result<()> {
    let c = common(cmd);
    if let Some(t) = c.threads {
        // Fails only if the global pool already exists, which is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build_global();
    }
    let config = config_json(cmd);
    let report = execute(cmd)?;
    let body = match c.format {
        Format::Json => {
            let doc = json!({ "config": config, "result": report.json });
            serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidArgument(e.to_string()))? + "\n"
        }
        Format::Text => format!("# config: {config}\n{}", report.text),
        Format::Csv => {
            let csv = report.csv.ok_or_else(|| {
                Error::InvalidArgument(format!("{} has no csv output", command_name(cmd)))
            })?;
            format!("# config: {config}\n{csv}")
        }
    };
    let io = |e: std::io::Error| Error::InvalidArgument(format!("cannot write output: {e}"));
    match &c.out {
        Some(path) => std::fs::write(path, body).map_err(io),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(io),
    }
}

fn load_graph(c: &Common) -> Result<DirectedGraph> {
    if let Some(path) = &c.edges {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", path.display())))?;
        return DirectedGraph::parse_edge_list(&text);
    }
    let family = c
        .family
        .ok_or_else(|| Error::InvalidArgument("one of --family or --edges is required".into()))?;
    let n = c
        .n
        .ok_or_else(|| Error::InvalidArgument("--n is required with --family".into()))?;
    match family {
        FamilyArg::Complete => DirectedGraph::generate(Family::Complete, n),
        FamilyArg::Path => DirectedGraph::generate(Family::Path, n),
        FamilyArg::Dicycle => DirectedGraph::generate(Family::Dicycle, n),
        FamilyArg::RandomSc => random_strongly_connected(n, c.p, &mut RngStream::new(c.seed)),
    }
}

fn load_valuation(c: &Common, g: &DirectedGraph) -> Result<Valuation> {
    let arg = c
        .valuation
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("--valuation is required".into()))?;
    let f = if let Some(k) = arg.strip_prefix("constant:") {
        let k = k
            .trim()
            .parse()
            .map_err(|_| Error::InvalidArgument(format!("bad constant '{k}'")))?;
        Valuation::constant(g.n(), k)?
    } else if arg == "worst" {
        markov::worst_case_convergence_time(g, c.cap)?.worst_valuation
    } else if std::path::Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {arg}: {e}")))?;
        text.trim().parse()?
    } else {
        arg.parse()?
    };
    f.check_for(g)?;
    Ok(f)
}

fn max_rounds(c: &Common, n: usize) -> u64 {
    c.max_rounds.unwrap_or_else(|| estimator::default_max_rounds(n))
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

fn execute(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Gen(c) => {
            let g = load_graph(c)?;
            let edges: Vec<(usize, usize)> = g.edges().collect();
            Ok(Report {
                json: json!({ "n": g.n(), "edges": edges }),
                text: g.to_edge_list(),
                csv: Some(edges.iter().fold("u,v\n".to_string(), |mut s, (u, v)| {
                    let _ = writeln!(s, "{u},{v}");
                    s
                })),
            })
        }
        Command::Simulate(c) => {
            let g = load_graph(c)?;
            let f = load_valuation(c, &g)?;
            let mut rng = RngStream::new(c.seed);
            let t = dynamics::simulate_with(&g, &f, &mut rng, SimulationOptions::new(max_rounds(c, g.n())))?;
            let mut text = format!(
                "start {}\nconverged_at {}\ntruncated {}\n",
                f,
                t.converged_at.map_or("none".into(), |r| r.to_string()),
                t.truncated
            );
            text.push_str(&t.to_json_lines());
            let csv = t.rounds.iter().fold("t,v,g,h,max,digest\n".to_string(), |mut s, r| {
                let g = r.g.map_or(String::new(), |x| x.to_string());
                let _ = writeln!(s, "{},{},{},{},{},{}", r.t, r.vertex, g, r.h, r.max, r.digest);
                s
            });
            Ok(Report {
                json: to_json(&t),
                text,
                csv: Some(csv),
            })
        }
        Command::Exact(a) => {
            let g = load_graph(&a.common)?;
            let f = load_valuation(&a.common, &g)?;
            let t = markov::convergence_time_with(&g, &f, a.mode.into(), a.common.cap, markov::DEFAULT_EXACT_BLOCK_LIMIT)?;
            let shown = t.exact.as_ref().map_or_else(|| t.value.to_string(), |r| r.to_string());
            Ok(Report {
                json: json!({ "valuation": f, "time": t }),
                text: format!("{shown}\n"),
                csv: Some(format!("value,exact,states\n{},{},{}\n", t.value, shown, t.states)),
            })
        }
        Command::Period(a) => {
            let g = load_graph(&a.common)?;
            let chain = markov::build_chain(&g, a.mode.into(), a.common.cap)?;
            let comps = chain.absorbing_components();
            let all_constant = comps
                .iter()
                .all(|c| c.iter().all(|s| chain.states[s].is_constant()));
            let mut json = json!({
                "period": chain.period(),
                "states": chain.len(),
                "absorbing_components": comps.len(),
                "all_absorbing_constant": all_constant,
            });
            if a.dump_chain {
                json["chain"] = to_json(&chain.to_export());
            }
            Ok(Report {
                text: format!("{}\n", chain.period()),
                csv: Some(format!(
                    "period,states,absorbing_components\n{},{},{}\n",
                    chain.period(),
                    chain.len(),
                    comps.len()
                )),
                json,
            })
        }
        Command::Params(a) => {
            let g = load_graph(&a.common)?;
            let rounding = match a.rounding {
                RoundingArg::Floor => HalfRounding::Floor,
                RoundingArg::Ceil => HalfRounding::Ceil,
            };
            let r = params::bound_report_with(&g, params::DEFAULT_EXPANSION_CAP, rounding)?;
            let text = format!(
                "n {}\nphi_out {}\nphi_in {}\nphi_prime {}\nb {}\nmin_out_degree {}\nbound_undirected {}\nbound_strongly_connected {}\n",
                r.n, r.phi_out.value, r.phi_in.value, r.phi_prime, r.orbit_b, r.min_out_degree,
                r.bound_undirected, r.bound_strongly_connected
            );
            let csv = format!(
                "n,phi_out,phi_in,phi_prime,b,min_out_degree,bound_undirected,bound_strongly_connected\n{},{},{},{},{},{},{},{}\n",
                r.n, r.phi_out.value, r.phi_in.value, r.phi_prime, r.orbit_b, r.min_out_degree,
                r.bound_undirected, r.bound_strongly_connected
            );
            Ok(Report {
                json: to_json(&r),
                text,
                csv: Some(csv),
            })
        }
        Command::Mc(c) => {
            let g = load_graph(c)?;
            let f = load_valuation(c, &g)?;
            let r = estimator::mc_convergence(&g, &f, c.trials, max_rounds(c, g.n()), c.seed)?;
            Ok(Report {
                json: json!({ "valuation": f, "report": r }),
                text: format!(
                    "mean {}\nse {}\nq50 {}\nq90 {}\nq99 {}\ntruncated {}\n",
                    r.mean, r.std_error, r.q50, r.q90, r.q99, r.truncated_count
                ),
                csv: Some(format!("n,{}\n{},{}\n", estimator::McReport::CSV_HEADER, g.n(), r.csv_fields())),
            })
        }
        Command::Worst(a) => {
            let c = &a.common;
            let g = load_graph(c)?;
            match a.method {
                WorstMethod::Exact => {
                    let r = markov::worst_case_convergence_time(&g, c.cap)?;
                    let shown = r.worst_exact.as_ref().map_or_else(|| r.worst_value.to_string(), |x| x.to_string());
                    Ok(Report {
                        json: json!({
                            "worst_valuation": r.worst_valuation,
                            "worst_value": r.worst_value,
                            "worst_exact": r.worst_exact.as_ref().map(RationalJson::from),
                            "tolerance": r.tolerance,
                            "classes": r.states.len(),
                        }),
                        text: format!("{shown}\n{}\n", r.worst_valuation),
                        csv: Some(format!("valuation,value\n{},{}\n", r.worst_valuation, r.worst_value)),
                    })
                }
                WorstMethod::Mc => {
                    let strategy = a.sample.map_or_else(Strategy::default, Strategy::Sample);
                    let (f, r) =
                        estimator::empirical_worst_case(&g, strategy, c.trials, max_rounds(c, g.n()), c.seed)?;
                    Ok(Report {
                        json: json!({ "worst_valuation": f, "report": r }),
                        text: format!("{}\n{}\n", r.mean, f),
                        csv: Some(format!(
                            "valuation,{}\n{},{}\n",
                            estimator::McReport::CSV_HEADER,
                            f,
                            r.csv_fields()
                        )),
                    })
                }
            }
        }
        Command::Scaling(a) => {
            let family = match a.common.family {
                Some(FamilyArg::Complete) => Family::Complete,
                Some(FamilyArg::Path) => Family::Path,
                _ => {
                    return Err(Error::InvalidArgument(
                        "scaling needs --family complete or --family path".into(),
                    ))
                }
            };
            let rows = estimator::scaling_study(family, &a.ns, a.common.trials, a.common.seed, a.common.max_rounds)?;
            let csv = estimator::scaling_csv(&rows);
            Ok(Report {
                json: to_json(&rows),
                text: csv.clone(),
                csv: Some(csv),
            })
        }
        Command::Schedule(c) => {
            let g = load_graph(c)?;
            let f = load_valuation(c, &g)?;
            let schedule = dynamics::constructive_schedule(&g, &f)?;
            let end = dynamics::replay_all(&g, &f, &schedule)?.pop().unwrap_or_else(|| f.clone());
            let reached = end.is_constant() && end.max_value() == f.max_value();
            Ok(Report {
                json: json!({
                    "valuation": f,
                    "schedule": schedule,
                    "length": schedule.len(),
                    "final": end,
                    "reaches_constant_max": reached,
                }),
                text: format!(
                    "{}\n{}\n",
                    schedule.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
                    end
                ),
                csv: Some(schedule.iter().enumerate().fold("step,vertex\n".to_string(), |mut s, (i, v)| {
                    let _ = writeln!(s, "{},{v}", i + 1);
                    s
                })),
            })
        }
        Command::Couple(a) => {
            let s = estimator::coupling_study(a.q, &a.p_seq, a.common.trials, a.common.seed, a.significance)?;
            Ok(Report {
                text: format!(
                    "violations {}\nmean_p_prime {}\nmean_q {}\nmean_direct {}\nchi2 {} dof {} p {}\npass {}\n",
                    s.dominance_violations,
                    s.mean_p_prime,
                    s.mean_q,
                    s.mean_direct,
                    s.chi_square.statistic,
                    s.chi_square.dof,
                    s.chi_square.p_value,
                    s.pass
                ),
                csv: Some(format!(
                    "trials,violations,mean_p_prime,se,mean_q,mean_direct,chi2,dof,p_value,pass\n{},{},{},{},{},{},{},{},{},{}\n",
                    s.trials,
                    s.dominance_violations,
                    s.mean_p_prime,
                    s.se_p_prime,
                    s.mean_q,
                    s.mean_direct,
                    s.chi_square.statistic,
                    s.chi_square.dof,
                    s.chi_square.p_value,
                    s.pass
                )),
                json: to_json(&s),
            })
        }
    }
}
