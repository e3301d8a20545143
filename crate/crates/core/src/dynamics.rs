//! The asynchronous maximum model.
//!
//! Each round one vertex is drawn uniformly at random and replaces its value
//! with the maximum over its out-neighbours; a vertex with no out-neighbours
//! keeps its value. The update may lower a value.
//!
//! Besides the update rule this module tracks the two potentials used to
//! reason about convergence:
//!
//! * the strong edge set `S_t` (undirected graphs): maximum-valued vertices
//!   with a maximum-valued neighbour;
//! * the strong cycle set `C_t`: maximum-valued vertices on a directed cycle
//!   of maximum-valued vertices, or with an all-maximum path into one.
//!
//! Both only ever grow along a trajectory.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, SccDecomposition, VertexSet};
use crate::valuation::Valuation;

/// Trajectories keep full valuations for graphs with at most this many
/// vertices, and only digests above it.
pub const DEFAULT_FULL_VALUATION_THRESHOLD: usize = 64;

/// Seeded ChaCha8 stream.
///
/// Trial `i` of a batch with master seed `s` uses the generator seeded with
/// `s` and switched to stream `i` (`ChaCha8Rng::set_stream`), so every trial
/// is reproducible on its own regardless of scheduling.
#[derive(Clone, Debug)]
pub struct RngStream {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub const ALGORITHM: &'static str = "chacha8";

    pub fn new(seed: u64) -> Self {
        Self::for_trial(seed, 0)
    }

    pub fn for_trial(master_seed: u64, trial: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
        rng.set_stream(trial);
        Self {
            seed: master_seed,
            stream: trial,
            rng,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Uniform vertex in `[0, n)`.
    pub fn vertex(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.rng.fill_bytes(dst)
    }
}

/// Value `v` takes when updated under `f`; `None` for a sink.
fn updated_value(g: &DirectedGraph, f: &[u64], v: usize) -> Option<u64> {
    g.out_neighbors(v).iter().map(|&u| f[u]).max()
}

/// One update of vertex `v`.
pub fn step(g: &DirectedGraph, f: &Valuation, v: usize) -> Result<Valuation> {
    g.check_vertex(v)?;
    f.check_for(g)?;
    let mut next = f.clone();
    if let Some(x) = updated_value(g, f.values(), v) {
        next.set(v, x);
    }
    Ok(next)
}

/// One round: draws a vertex uniformly and updates it.
pub fn random_step(
    g: &DirectedGraph,
    f: &Valuation,
    rng: &mut RngStream,
) -> Result<(usize, Valuation)> {
    let v = rng.vertex(g.n());
    Ok((v, step(g, f, v)?))
}

/// True iff no single update changes `f`.
pub fn is_absorbing(g: &DirectedGraph, f: &Valuation) -> bool {
    (0..g.n()).all(|v| updated_value(g, f.values(), v).is_none_or(|x| x == f.get(v)))
}

/// Vertices holding the maximum that have a neighbour also holding it.
pub fn strong_edge_set(g: &DirectedGraph, f: &Valuation) -> Result<VertexSet> {
    if let Some((u, v)) = g.unpaired_edge() {
        return Err(Error::NotUndirected(u, v));
    }
    f.check_for(g)?;
    Ok(strong_edge_set_unchecked(g, f))
}

fn strong_edge_set_unchecked(g: &DirectedGraph, f: &Valuation) -> VertexSet {
    let m = f.max_value();
    (0..g.n())
        .filter(|&v| f.get(v) == m && g.out_neighbors(v).iter().any(|&u| f.get(u) == m))
        .collect()
}

/// The strong cycle set.
///
/// Let `H` be the subgraph induced by the maximum-valued vertices. The result
/// is every vertex of `H` inside an SCC of `H` with at least two vertices,
/// plus every vertex of `H` with an `H`-path into such an SCC.
pub fn strong_cycle_set(g: &DirectedGraph, f: &Valuation) -> VertexSet {
    let m = f.max_value();
    let n = g.n();
    let in_h = |v: usize| f.get(v) == m;
    let h_adj: Vec<Vec<usize>> = (0..n)
        .map(|v| {
            if in_h(v) {
                g.out_neighbors(v).iter().copied().filter(|&u| in_h(u)).collect()
            } else {
                Vec::new()
            }
        })
        .collect();
    let scc = SccDecomposition::of_adjacency(&h_adj);
    let mut member = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    for comp in scc.components.iter().filter(|c| c.len() >= 2) {
        for v in comp.iter() {
            member[v] = true;
            stack.push(v);
        }
    }
    // Walk H backwards from the cyclic core.
    let mut h_in = vec![Vec::new(); n];
    for (v, outs) in h_adj.iter().enumerate() {
        for &u in outs {
            h_in[u].push(v);
        }
    }
    while let Some(u) = stack.pop() {
        for &v in &h_in[u] {
            if !member[v] {
                member[v] = true;
                stack.push(v);
            }
        }
    }
    (0..n).filter(|&v| member[v]).collect()
}

/// Update order that drives `f` to the constant valuation at its maximum.
///
/// The maximum-valued set `S` is grown through the `k`-boundaries of `S` in
/// the reversed graph: every vertex of level `k` has an edge into level
/// `k - 1`, so updating the levels in order copies the maximum outward. The
/// schedule has exactly `n - |S|` entries.
pub fn constructive_schedule(g: &DirectedGraph, f: &Valuation) -> Result<Vec<usize>> {
    f.check_for(g)?;
    let levels = g.dual().k_boundary_partition(&f.argmax())?;
    Ok(levels.iter().skip(1).flat_map(VertexSet::iter).collect())
}

/// A cycle through a maximum-valued vertex together with its longest run of
/// consecutive maximum-valued vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaxMinChain {
    /// Cycle in edge order, starting at its smallest vertex id.
    pub cycle: Vec<usize>,
    /// The run, in cycle order.
    pub chain: Vec<usize>,
}

/// Among the shortest cycles through a maximum-valued vertex, one whose
/// maximal chain is longest. Ties go to the lexicographically first cycle.
///
/// Enumerates cycles by brute force; fails once more than `cycle_budget`
/// candidate cycles have been generated.
pub fn max_min_chain(g: &DirectedGraph, f: &Valuation, cycle_budget: u64) -> Result<MaxMinChain> {
    f.check_for(g)?;
    if !g.is_strongly_connected() || g.n() < 2 {
        return Err(Error::NotStronglyConnected);
    }
    let m = f.max_value();
    let maxed = f.argmax();
    let shortest = maxed
        .iter()
        .filter_map(|w| shortest_cycle_through(g, w))
        .min()
        .ok_or(Error::NotStronglyConnected)?;

    let mut best: Option<MaxMinChain> = None;
    let mut generated = 0u64;
    let mut visit = |cycle: &[usize]| -> Result<()> {
        generated += 1;
        if generated > cycle_budget {
            return Err(Error::BudgetExceeded {
                what: "cycle enumeration",
                budget: cycle_budget,
            });
        }
        if !cycle.iter().any(|&v| maxed.contains(v)) {
            return Ok(());
        }
        let chain = longest_cyclic_run(cycle, |v| f.get(v) == m);
        if best.as_ref().is_none_or(|b| chain.len() > b.chain.len()) {
            best = Some(MaxMinChain {
                cycle: cycle.to_vec(),
                chain,
            });
        }
        Ok(())
    };
    for_each_cycle_of_length(g, shortest, &mut visit)?;
    best.ok_or(Error::NotStronglyConnected)
}

/// Length of the shortest directed cycle through `v`, if any.
pub(crate) fn shortest_cycle_through(g: &DirectedGraph, v: usize) -> Option<usize> {
    let dist = g.bfs_distances(g.out_neighbors(v).iter().copied());
    dist[v].map(|d| d + 1)
}

/// Visits every simple cycle of exactly `len` vertices once, rotated so its
/// smallest vertex comes first, in lexicographic order.
fn for_each_cycle_of_length<F>(g: &DirectedGraph, len: usize, visit: &mut F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    fn extend<F>(
        g: &DirectedGraph,
        len: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(&[usize]) -> Result<()>,
    {
        let start = path[0];
        let last = *path.last().unwrap_or(&start);
        if path.len() == len {
            if g.has_edge(last, start) {
                visit(path)?;
            }
            return Ok(());
        }
        for &w in g.out_neighbors(last) {
            if w > start && !on_path[w] {
                on_path[w] = true;
                path.push(w);
                extend(g, len, path, on_path, visit)?;
                path.pop();
                on_path[w] = false;
            }
        }
        Ok(())
    }

    let mut on_path = vec![false; g.n()];
    for start in 0..g.n() {
        let mut path = vec![start];
        on_path[start] = true;
        extend(g, len, &mut path, &mut on_path, visit)?;
        on_path[start] = false;
    }
    Ok(())
}

/// Longest run of consecutive positions (cyclically) satisfying `pred`.
fn longest_cyclic_run(cycle: &[usize], pred: impl Fn(usize) -> bool) -> Vec<usize> {
    let k = cycle.len();
    if cycle.iter().all(|&v| pred(v)) {
        return cycle.to_vec();
    }
    let mut best: (usize, usize) = (0, 0); // (start, length)
    for start in 0..k {
        let prev = cycle[(start + k - 1) % k];
        if !pred(cycle[start]) || pred(prev) {
            continue;
        }
        let run = (0..k).take_while(|&i| pred(cycle[(start + i) % k])).count();
        if run > best.1 {
            best = (start, run);
        }
    }
    (0..best.1).map(|i| cycle[(best.0 + i) % k]).collect()
}

/// One recorded round of a trajectory.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Round {
    pub t: u64,
    #[serde(rename = "v")]
    pub vertex: usize,
    /// `|S_t|`; absent on graphs that are not undirected.
    pub g: Option<usize>,
    /// `|C_t|`.
    pub h: usize,
    pub max: u64,
    pub digest: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub valuation: Option<Valuation>,
}

/// A simulated or replayed run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    /// Seed of the generating stream; `None` for a replayed schedule.
    pub seed: Option<u64>,
    pub initial: Valuation,
    pub initial_g: Option<usize>,
    pub initial_h: usize,
    pub rounds: Vec<Round>,
    pub converged_at: Option<u64>,
    pub truncated: bool,
}

impl Trajectory {
    /// Valuation after the last recorded round, when full valuations were kept.
    pub fn final_valuation(&self) -> Option<&Valuation> {
        match self.rounds.last() {
            None => Some(&self.initial),
            Some(r) => r.valuation.as_ref(),
        }
    }

    /// JSON lines, one object per round: `{t, v, g, h, max, digest[, valuation]}`.
    pub fn to_json_lines(&self) -> String {
        self.rounds
            .iter()
            .map(|r| serde_json::to_string(r).unwrap_or_default() + "\n")
            .collect()
    }
}

/// Options for [`simulate_with`].
#[derive(Clone, Copy, Debug)]
pub struct SimulationOptions {
    pub max_rounds: u64,
    /// Keep full valuations when `n` is at most this.
    pub full_valuation_threshold: usize,
}

impl SimulationOptions {
    pub fn new(max_rounds: u64) -> Self {
        Self {
            max_rounds,
            full_valuation_threshold: DEFAULT_FULL_VALUATION_THRESHOLD,
        }
    }
}

/// Runs random rounds until `f0` is absorbed or `max_rounds` is hit.
pub fn simulate(
    g: &DirectedGraph,
    f0: &Valuation,
    rng: &mut RngStream,
    max_rounds: u64,
) -> Result<Trajectory> {
    simulate_with(g, f0, rng, SimulationOptions::new(max_rounds))
}

pub fn simulate_with(
    g: &DirectedGraph,
    f0: &Valuation,
    rng: &mut RngStream,
    opts: SimulationOptions,
) -> Result<Trajectory> {
    let seed = rng.seed();
    let mut choose = |_: u64| Some(rng.vertex(g.n()));
    let mut traj = run(g, f0, &mut choose, opts)?;
    traj.seed = Some(seed);
    Ok(traj)
}

/// Replays a fixed vertex sequence, recording every round. Stops early if
/// the valuation becomes absorbing.
pub fn replay(g: &DirectedGraph, f0: &Valuation, schedule: &[usize]) -> Result<Trajectory> {
    schedule.iter().try_for_each(|&v| g.check_vertex(v))?;
    let mut choose = |t: u64| schedule.get(t as usize - 1).copied();
    let opts = SimulationOptions::new(schedule.len() as u64);
    run(g, f0, &mut choose, opts)
}

/// Replays `schedule` without stopping at absorption and returns every
/// intermediate valuation, starting with `f0`.
pub fn replay_all(g: &DirectedGraph, f0: &Valuation, schedule: &[usize]) -> Result<Vec<Valuation>> {
    let mut out = vec![f0.clone()];
    for &v in schedule {
        let next = step(g, out.last().unwrap_or(f0), v)?;
        out.push(next);
    }
    Ok(out)
}

fn run(
    g: &DirectedGraph,
    f0: &Valuation,
    choose: &mut dyn FnMut(u64) -> Option<usize>,
    opts: SimulationOptions,
) -> Result<Trajectory> {
    f0.check_for(g)?;
    let undirected = g.is_undirected();
    let keep = g.n() <= opts.full_valuation_threshold;
    let potential_g = |f: &Valuation| undirected.then(|| strong_edge_set_unchecked(g, f).len());

    let mut traj = Trajectory {
        seed: None,
        initial: f0.clone(),
        initial_g: potential_g(f0),
        initial_h: strong_cycle_set(g, f0).len(),
        rounds: Vec::new(),
        converged_at: None,
        truncated: false,
    };
    let mut f = f0.clone();
    if is_absorbing(g, &f) {
        traj.converged_at = Some(0);
        return Ok(traj);
    }
    let mut t = 0u64;
    while t < opts.max_rounds {
        t += 1;
        let Some(v) = choose(t) else { break };
        if let Some(x) = updated_value(g, f.values(), v) {
            f.set(v, x);
        }
        traj.rounds.push(Round {
            t,
            vertex: v,
            g: potential_g(&f),
            h: strong_cycle_set(g, &f).len(),
            max: f.max_value(),
            digest: f.digest(),
            valuation: keep.then(|| f.clone()),
        });
        if is_absorbing(g, &f) {
            traj.converged_at = Some(t);
            return Ok(traj);
        }
    }
    traj.truncated = true;
    Ok(traj)
}

/// Outcome of a potential-free run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOutcome {
    pub rounds: u64,
    pub absorbed: bool,
}

/// Round counter for long Monte Carlo runs.
///
/// Tracks which vertices would change if updated; a round costs
/// `O(out-degree)` unless the chosen vertex changes, in which case its
/// in-neighbours are rechecked. Consumes the random stream exactly like
/// [`simulate`], so both report the same absorption round for the same seed.
#[derive(Clone, Debug)]
pub struct FastRunner<'g> {
    g: &'g DirectedGraph,
    in_adj: Vec<Vec<usize>>,
}

impl<'g> FastRunner<'g> {
    pub fn new(g: &'g DirectedGraph) -> Self {
        Self {
            g,
            in_adj: g.in_adjacency(),
        }
    }

    pub fn graph(&self) -> &DirectedGraph {
        self.g
    }

    pub fn run(&self, f0: &Valuation, rng: &mut RngStream, max_rounds: u64) -> RunOutcome {
        let g = self.g;
        let n = g.n();
        let mut f = f0.values().to_vec();
        let unstable_at = |f: &[u64], v: usize| updated_value(g, f, v).is_some_and(|x| x != f[v]);
        let mut unstable: Vec<bool> = (0..n).map(|v| unstable_at(&f, v)).collect();
        let mut pending = unstable.iter().filter(|&&b| b).count();
        let mut rounds = 0u64;
        while pending > 0 {
            if rounds == max_rounds {
                return RunOutcome {
                    rounds,
                    absorbed: false,
                };
            }
            rounds += 1;
            let v = rng.vertex(n);
            if !unstable[v] {
                continue;
            }
            if let Some(x) = updated_value(g, &f, v) {
                f[v] = x;
            }
            unstable[v] = false;
            pending -= 1;
            for &u in &self.in_adj[v] {
                let now = unstable_at(&f, u);
                if now != unstable[u] {
                    unstable[u] = now;
                    if now {
                        pending += 1;
                    } else {
                        pending -= 1;
                    }
                }
            }
        }
        RunOutcome {
            rounds,
            absorbed: true,
        }
    }
}
