//! The Markov chain of possibilities.
//!
//! States are valuations; from each state every vertex is updated with
//! probability `1/n`, and transitions reaching the same valuation are merged.
//! In [`ChainMode::Raw`] the states are all of `[n]^n`; in
//! [`ChainMode::Quotient`] they are canonical valuations and each successor is
//! canonicalized, which preserves hitting times because equivalent
//! valuations evolve equivalently.
//!
//! Expected hitting times of the absorbing components are solved block by
//! block over the strongly connected components of the chain, in exact
//! rational arithmetic when the blocks are small and in `f64` otherwise.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, SccDecomposition, VertexSet};
use crate::linalg;
use crate::valuation::{canonical_count, enumerate_canonical, Valuation};

/// Default state budget for chain construction.
pub const DEFAULT_STATE_CAP: usize = 50_000;

/// Hitting times are solved exactly when no transient block of the chain has
/// more states than this.
pub const DEFAULT_EXACT_BLOCK_LIMIT: usize = 160;

/// Maximum relative residual accepted from the floating-point solver.
pub const FLOAT_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainMode {
    Raw,
    Quotient,
}

impl FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw" => Ok(ChainMode::Raw),
            "quotient" => Ok(ChainMode::Quotient),
            other => Err(Error::InvalidArgument(format!(
                "unknown chain mode '{other}' (expected raw or quotient)"
            ))),
        }
    }
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMode::Raw => "raw",
            ChainMode::Quotient => "quotient",
        })
    }
}

/// Row-stochastic matrix with exact rational entries, stored sparsely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, Rational64)>>,
}

impl TransitionMatrix {
    /// Validates that every probability lies in `(0, 1]`, every target is in
    /// range and every row sums to exactly one. Repeated targets are merged.
    pub fn from_rows(rows: Vec<Vec<(usize, Rational64)>>) -> Result<Self> {
        let len = rows.len();
        let mut merged = Vec::with_capacity(len);
        for (row, entries) in rows.into_iter().enumerate() {
            let mut acc: BTreeMap<usize, Rational64> = BTreeMap::new();
            for (to, p) in entries {
                if to >= len {
                    return Err(Error::InvalidChain {
                        row,
                        reason: format!("target {to} out of range"),
                    });
                }
                if p <= Rational64::zero() || p > Rational64::one() {
                    return Err(Error::InvalidChain {
                        row,
                        reason: format!("probability {p} outside (0, 1]"),
                    });
                }
                *acc.entry(to).or_insert_with(Rational64::zero) += p;
            }
            let total: Rational64 = acc.values().sum();
            if total != Rational64::one() {
                return Err(Error::InvalidChain {
                    row,
                    reason: format!("probabilities sum to {total}"),
                });
            }
            merged.push(acc.into_iter().collect());
        }
        Ok(Self { rows: merged })
    }

    /// Builds a matrix on `len` states from `(from, to, p)` triples.
    pub fn from_triples(len: usize, triples: &[(usize, usize, Rational64)]) -> Result<Self> {
        let mut rows = vec![Vec::new(); len];
        for &(from, to, p) in triples {
            if from >= len {
                return Err(Error::InvalidChain {
                    row: from,
                    reason: format!("source {from} out of range"),
                });
            }
            rows[from].push((to, p));
        }
        Self::from_rows(rows)
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, state: usize) -> &[(usize, Rational64)] {
        &self.rows[state]
    }

    pub fn rows(&self) -> &[Vec<(usize, Rational64)>] {
        &self.rows
    }

    pub fn successors(&self) -> Vec<Vec<usize>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|&(to, _)| to).collect())
            .collect()
    }

    pub fn scc(&self) -> SccDecomposition {
        SccDecomposition::of_adjacency(&self.successors())
    }

    /// Components with no transition leaving them.
    pub fn absorbing_components(&self) -> Vec<VertexSet> {
        let scc = self.scc();
        scc.sink_components()
            .into_iter()
            .map(|c| scc.components[c].clone())
            .collect()
    }

    /// Size of the largest absorbing component.
    pub fn period(&self) -> usize {
        self.absorbing_components()
            .iter()
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
    }

    /// States whose only transition is a certain self-loop.
    pub fn fixed_states(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&s| self.rows[s] == [(s, Rational64::one())])
            .collect()
    }

    /// Expected number of steps to enter an absorbing component from every
    /// state. Blocks larger than `exact_block_limit` switch the whole solve to
    /// floating point.
    pub fn hitting_times(&self, exact_block_limit: usize) -> Result<HittingTimes> {
        let scc = self.scc();
        let mut absorbing = vec![false; scc.len()];
        for c in scc.sink_components() {
            absorbing[c] = true;
        }
        let largest = (0..scc.len())
            .filter(|&c| !absorbing[c])
            .map(|c| scc.components[c].len())
            .max()
            .unwrap_or(0);
        if largest <= exact_block_limit {
            self.solve_exact(&scc, &absorbing)
        } else {
            self.solve_float(&scc, &absorbing)
        }
    }

    // Components are numbered sinks first, so every block only depends on
    // blocks with smaller indices.
    fn solve_exact(&self, scc: &SccDecomposition, absorbing: &[bool]) -> Result<HittingTimes> {
        let mut e = vec![BigRational::zero(); self.len()];
        for (c, comp) in scc.components.iter().enumerate() {
            if absorbing[c] {
                continue;
            }
            let members = comp.to_vec();
            let local: HashMap<usize, usize> =
                members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let k = members.len();
            let mut a = vec![vec![BigRational::zero(); k]; k];
            let mut b = vec![BigRational::one(); k];
            for (i, &s) in members.iter().enumerate() {
                a[i][i] += BigRational::one();
                for &(to, p) in &self.rows[s] {
                    let p = linalg::big(p);
                    match local.get(&to) {
                        Some(&j) => a[i][j] -= p,
                        None => b[i] += p * &e[to],
                    }
                }
            }
            let x = linalg::solve_exact(a, b).ok_or(Error::NonAbsorbingReachability(members[0]))?;
            for (s, v) in members.into_iter().zip(x) {
                e[s] = v;
            }
        }
        let values = e.iter().map(linalg::to_f64).collect();
        Ok(HittingTimes {
            exact: Some(e),
            values,
            residual: 0.0,
        })
    }

    fn solve_float(&self, scc: &SccDecomposition, absorbing: &[bool]) -> Result<HittingTimes> {
        let mut e = vec![0.0f64; self.len()];
        let p64 = |p: Rational64| *p.numer() as f64 / *p.denom() as f64;
        for (c, comp) in scc.components.iter().enumerate() {
            if absorbing[c] {
                continue;
            }
            let members = comp.to_vec();
            let local: HashMap<usize, usize> =
                members.iter().enumerate().map(|(i, &s)| (s, i)).collect();
            let k = members.len();
            let mut a = vec![vec![0.0; k]; k];
            let mut b = vec![1.0; k];
            for (i, &s) in members.iter().enumerate() {
                a[i][i] += 1.0;
                for &(to, p) in &self.rows[s] {
                    match local.get(&to) {
                        Some(&j) => a[i][j] -= p64(p),
                        None => b[i] += p64(p) * e[to],
                    }
                }
            }
            let x = linalg::solve_f64(&a, &b).ok_or(Error::NonAbsorbingReachability(members[0]))?;
            for (s, v) in members.into_iter().zip(x) {
                e[s] = v;
            }
        }
        // Relative residual of the defining recurrence over transient states.
        let scale = e.iter().fold(1.0f64, |m, &x| m.max(x.abs()));
        let residual = (0..self.len())
            .filter(|&s| !absorbing[scc.component_of[s]])
            .map(|s| {
                let rhs: f64 = 1.0 + self.rows[s].iter().map(|&(to, p)| p64(p) * e[to]).sum::<f64>();
                (e[s] - rhs).abs()
            })
            .fold(0.0f64, f64::max)
            / scale;
        if !residual.is_finite() || residual >= FLOAT_TOLERANCE {
            return Err(Error::Residual {
                residual,
                tolerance: FLOAT_TOLERANCE,
            });
        }
        Ok(HittingTimes {
            exact: None,
            values: e,
            residual,
        })
    }
}

/// Expected steps to absorption, per state.
#[derive(Clone, Debug, PartialEq)]
pub struct HittingTimes {
    /// Exact values when the rational solver was used.
    pub exact: Option<Vec<BigRational>>,
    pub values: Vec<f64>,
    /// Relative residual of the float solve; zero for exact solves.
    pub residual: f64,
}

/// A chain of possibilities together with its state labels.
#[derive(Clone, Debug)]
pub struct ChainModel {
    pub mode: ChainMode,
    /// Number of graph vertices.
    pub n: usize,
    pub states: Vec<Valuation>,
    pub transitions: TransitionMatrix,
    pub scc: SccDecomposition,
    index: HashMap<Valuation, usize>,
}

impl ChainModel {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Index of the state representing `f`. In quotient mode `f` is
    /// canonicalized first; in raw mode it must already use values in `[n]`.
    pub fn state_of(&self, f: &Valuation) -> Option<usize> {
        match self.mode {
            ChainMode::Raw => self.index.get(f).copied(),
            ChainMode::Quotient => self.index.get(&f.canonicalize()).copied(),
        }
    }

    pub fn absorbing_components(&self) -> Vec<VertexSet> {
        absorbing_components(self)
    }

    /// States lying in absorbing components.
    pub fn absorbing_states(&self) -> VertexSet {
        self.absorbing_components()
            .iter()
            .fold(VertexSet::new(), |acc, c| acc.union(c))
    }

    pub fn period(&self) -> usize {
        self.absorbing_components()
            .iter()
            .map(VertexSet::len)
            .max()
            .unwrap_or(0)
    }

    pub fn to_export(&self) -> ChainExport {
        ChainExport {
            mode: self.mode,
            n: self.n,
            states: self.states.iter().map(|s| s.values().to_vec()).collect(),
            transitions: self
                .transitions
                .rows()
                .iter()
                .enumerate()
                .flat_map(|(src, row)| {
                    row.iter().map(move |&(dst, p)| (src, dst, *p.numer(), *p.denom()))
                })
                .collect(),
            absorbing: self.absorbing_states().to_vec(),
        }
    }
}

/// JSON shape of a chain: `transitions` holds `(src, dst, num, den)`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainExport {
    pub mode: ChainMode,
    pub n: usize,
    pub states: Vec<Vec<u64>>,
    pub transitions: Vec<(usize, usize, i64, i64)>,
    pub absorbing: Vec<usize>,
}

/// Number of states the full chain would have.
pub fn state_count(n: usize, mode: ChainMode) -> Option<u128> {
    match mode {
        ChainMode::Raw => (n as u128).checked_pow(n as u32),
        ChainMode::Quotient => Some(canonical_count(n)),
    }
}

/// The full chain over every state of the chosen mode.
pub fn build_chain(g: &DirectedGraph, mode: ChainMode, cap: usize) -> Result<ChainModel> {
    let n = g.n();
    let needed = state_count(n, mode);
    if needed.is_none_or(|c| c > cap as u128) {
        let shown = needed.map_or_else(|| format!("more than {} states", u128::MAX), |c| format!("{c} states"));
        return Err(Error::cap("chain construction", shown, cap as u64));
    }
    let seeds: Vec<Valuation> = match mode {
        ChainMode::Raw => raw_valuations(n),
        ChainMode::Quotient => enumerate_canonical(n, n)?.collect(),
    };
    explore(g, mode, seeds, cap)
}

/// The sub-chain of states reachable from `f`.
pub fn build_reachable(g: &DirectedGraph, f: &Valuation, mode: ChainMode, cap: usize) -> Result<ChainModel> {
    f.check_for(g)?;
    let start = match mode {
        ChainMode::Quotient => f.canonicalize(),
        ChainMode::Raw if f.max_value() <= g.n() as u64 => f.clone(),
        ChainMode::Raw => {
            return Err(Error::InvalidArgument(format!(
                "raw chain states use values in 1..={}; canonicalize first",
                g.n()
            )))
        }
    };
    explore(g, mode, vec![start], cap)
}

fn raw_valuations(n: usize) -> Vec<Valuation> {
    let total = (n as u64).pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut values = vec![0u64; n];
            for slot in values.iter_mut().rev() {
                *slot = code % n as u64 + 1;
                code /= n as u64;
            }
            Valuation::new(values).expect("values are positive")
        })
        .collect()
}

fn explore(g: &DirectedGraph, mode: ChainMode, seeds: Vec<Valuation>, cap: usize) -> Result<ChainModel> {
    let n = g.n();
    let mut states: Vec<Valuation> = Vec::new();
    let mut index: HashMap<Valuation, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |f: Valuation, states: &mut Vec<Valuation>, queue: &mut VecDeque<usize>| -> Result<usize> {
        if let Some(&i) = index.get(&f) {
            return Ok(i);
        }
        if states.len() == cap {
            return Err(Error::cap("chain construction", format!("more than {cap} states"), cap as u64));
        }
        let i = states.len();
        index.insert(f.clone(), i);
        states.push(f);
        queue.push_back(i);
        Ok(i)
    };
    for f in seeds {
        intern(f, &mut states, &mut queue)?;
    }
    let mut rows: Vec<Vec<(usize, Rational64)>> = Vec::new();
    while let Some(s) = queue.pop_front() {
        let f = states[s].clone();
        let mut counts: BTreeMap<usize, i64> = BTreeMap::new();
        for v in 0..n {
            let mut next = dynamics::step(g, &f, v)?;
            if mode == ChainMode::Quotient {
                next = next.canonicalize();
            }
            let t = intern(next, &mut states, &mut queue)?;
            *counts.entry(t).or_default() += 1;
        }
        if rows.len() <= s {
            rows.resize(s + 1, Vec::new());
        }
        rows[s] = counts
            .into_iter()
            .map(|(t, k)| (t, Rational64::new(k, n as i64)))
            .collect();
    }
    let index = states.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
    let transitions = TransitionMatrix::from_rows(rows)?;
    let scc = transitions.scc();
    Ok(ChainModel {
        mode,
        n,
        states,
        transitions,
        scc,
        index,
    })
}

/// Absorbing components of the chain, as sets of state indices.
pub fn absorbing_components(c: &ChainModel) -> Vec<VertexSet> {
    c.scc
        .sink_components()
        .into_iter()
        .map(|i| c.scc.components[i].clone())
        .collect()
}

/// Period of `g`: the size of the largest absorbing component of its raw
/// chain.
pub fn period(g: &DirectedGraph, cap: usize) -> Result<usize> {
    Ok(build_chain(g, ChainMode::Raw, cap)?.period())
}

/// Expected rounds until absorption from one valuation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTime {
    #[serde(serialize_with = "serialize_opt_rational")]
    pub exact: Option<BigRational>,
    pub value: f64,
    /// Relative residual; zero when exact.
    pub residual: f64,
    /// States in the reachable sub-chain.
    pub states: usize,
}

/// `T(G, f)` on the quotient chain reachable from `f`.
pub fn exact_convergence_time(g: &DirectedGraph, f: &Valuation, cap: usize) -> Result<ConvergenceTime> {
    convergence_time_with(g, f, ChainMode::Quotient, cap, DEFAULT_EXACT_BLOCK_LIMIT)
}

pub fn convergence_time_with(
    g: &DirectedGraph,
    f: &Valuation,
    mode: ChainMode,
    cap: usize,
    exact_block_limit: usize,
) -> Result<ConvergenceTime> {
    let chain = build_reachable(g, f, mode, cap)?;
    // The start is interned first.
    let times = chain.transitions.hitting_times(exact_block_limit)?;
    Ok(ConvergenceTime {
        exact: times.exact.map(|mut e| e.swap_remove(0)),
        value: times.values[0],
        residual: times.residual,
        states: chain.len(),
    })
}

/// Convergence times over every canonical valuation, with the worst one.
#[derive(Clone, Debug, Serialize)]
pub struct HittingTimeReport {
    pub states: Vec<Valuation>,
    pub values: Vec<f64>,
    #[serde(skip)]
    pub exact: Option<Vec<BigRational>>,
    /// Zero for exact solves, else the relative residual.
    pub tolerance: f64,
    pub worst_state: usize,
    pub worst_valuation: Valuation,
    pub worst_value: f64,
    #[serde(serialize_with = "serialize_opt_rational")]
    pub worst_exact: Option<BigRational>,
}

/// `max_f T(G, f)` over canonical valuations. Ties go to the
/// lexicographically smallest valuation.
pub fn worst_case_convergence_time(g: &DirectedGraph, cap: usize) -> Result<HittingTimeReport> {
    worst_case_with(g, cap, DEFAULT_EXACT_BLOCK_LIMIT)
}

pub fn worst_case_with(g: &DirectedGraph, cap: usize, exact_block_limit: usize) -> Result<HittingTimeReport> {
    let chain = build_chain(g, ChainMode::Quotient, cap)?;
    let times = chain.transitions.hitting_times(exact_block_limit)?;
    let worst_state = match &times.exact {
        Some(e) => (0..e.len()).fold(0, |best, s| if e[s] > e[best] { s } else { best }),
        None => (0..times.values.len()).fold(0, |best, s| {
            if times.values[s] > times.values[best] { s } else { best }
        }),
    };
    Ok(HittingTimeReport {
        worst_valuation: chain.states[worst_state].clone(),
        worst_value: times.values[worst_state],
        worst_exact: times.exact.as_ref().map(|e| e[worst_state].clone()),
        worst_state,
        tolerance: times.residual,
        exact: times.exact,
        values: times.values,
        states: chain.states,
    })
}

/// Whether some constant valuation is reachable from `f`.
pub fn verify_path_to_constant(g: &DirectedGraph, f: &Valuation, cap: usize) -> Result<bool> {
    let chain = build_reachable(g, f, ChainMode::Quotient, cap)?;
    Ok(chain.states.iter().any(Valuation::is_constant))
}

fn serialize_opt_rational<S: serde::Serializer>(x: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match x {
        None => s.serialize_none(),
        Some(r) => RationalJson::from(r).serialize(s),
    }
}

/// A rational as `{num, den}` strings, so arbitrarily large values survive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalJson {
    fn from(r: &BigRational) -> Self {
        Self {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}
