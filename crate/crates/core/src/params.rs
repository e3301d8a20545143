//! Graph parameters that appear in convergence bounds: vertex expansion,
//! orbit, harmonic numbers and the gambler's-ruin expectation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::dynamics::shortest_cycle_through;
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexSet};
use crate::linalg;

/// Largest graph for the exhaustive expansion search.
pub const DEFAULT_EXPANSION_CAP: usize = 20;

/// How the size limit `|A| <= n/2` is rounded for odd `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfRounding {
    #[default]
    Floor,
    Ceil,
}

impl HalfRounding {
    pub fn limit(self, n: usize) -> usize {
        match self {
            HalfRounding::Floor => n / 2,
            HalfRounding::Ceil => n.div_ceil(2),
        }
    }
}

impl FromStr for HalfRounding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(HalfRounding::Floor),
            "ceil" => Ok(HalfRounding::Ceil),
            other => Err(Error::InvalidArgument(format!(
                "unknown rounding '{other}' (expected floor or ceil)"
            ))),
        }
    }
}

impl fmt::Display for HalfRounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HalfRounding::Floor => "floor",
            HalfRounding::Ceil => "ceil",
        })
    }
}

/// A minimum of `|Γ(A)| / |A|` and a set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expansion {
    #[serde(serialize_with = "serialize_fraction")]
    pub value: Rational64,
    pub witness: VertexSet,
}

/// Outward vertex expansion: the minimum of `|Γ(A)| / |A|` over non-empty
/// `A` with `|A| <= ⌊n/2⌋`. Ties go to the smallest `A`, then to the
/// lexicographically first.
pub fn vertex_expansion_out(g: &DirectedGraph) -> Result<Expansion> {
    vertex_expansion_with(g, DEFAULT_EXPANSION_CAP, HalfRounding::Floor)
}

/// Inward vertex expansion: the outward expansion of the reversed graph.
pub fn vertex_expansion_in(g: &DirectedGraph) -> Result<Expansion> {
    vertex_expansion_with(&g.dual(), DEFAULT_EXPANSION_CAP, HalfRounding::Floor)
}

pub fn vertex_expansion_with(g: &DirectedGraph, cap: usize, rounding: HalfRounding) -> Result<Expansion> {
    let n = g.n();
    if n > cap {
        return Err(Error::cap("vertex expansion", format!("n = {n}"), cap as u64));
    }
    let limit = rounding.limit(n);
    if limit == 0 {
        return Err(Error::InvalidArgument(
            "vertex expansion needs at least two vertices".into(),
        ));
    }
    let out_mask: Vec<u32> = (0..n)
        .map(|v| g.out_neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    // neighbourhood[mask] = union of out-masks over the members of mask
    let full = 1usize << n;
    let mut neighbourhood = vec![0u32; full];
    let mut best: Option<(u32, u32, u32)> = None; // (|Γ(A)|, |A|, A)
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        neighbourhood[mask] = neighbourhood[mask & (mask - 1)] | out_mask[low];
        let size = mask.count_ones();
        if size as usize > limit {
            continue;
        }
        let a = mask as u32;
        let boundary = (neighbourhood[mask] & !a).count_ones();
        let better = match best {
            None => true,
            Some((bb, bs, ba)) => match (u64::from(boundary) * u64::from(bs)).cmp(&(u64::from(bb) * u64::from(size))) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => size < bs || (size == bs && lex_less(a, ba)),
            },
        };
        if better {
            best = Some((boundary, size, a));
        }
    }
    let (boundary, size, a) = best.expect("at least one admissible subset");
    Ok(Expansion {
        value: Rational64::new(i64::from(boundary), i64::from(size)),
        witness: (0..n).filter(|&v| a & (1 << v) != 0).collect(),
    })
}

/// Lexicographic comparison of two equal-size sets given as bitmasks: the
/// smallest element of the symmetric difference decides.
fn lex_less(a: u32, b: u32) -> bool {
    let diff = a ^ b;
    diff != 0 && a & (diff & diff.wrapping_neg()) != 0
}

/// Orbit of a strongly connected graph: the largest, over vertices, of the
/// length of the shortest directed cycle through the vertex. Returns the
/// value and the smallest vertex attaining it.
pub fn orbit(g: &DirectedGraph) -> Result<(usize, usize)> {
    if g.n() < 2 || !g.is_strongly_connected() {
        return Err(Error::NotStronglyConnected);
    }
    let lengths = orbit_per_vertex(g)?;
    let (witness, &b) = lengths
        .iter()
        .enumerate()
        .rev()
        .max_by_key(|&(_, b)| b)
        .ok_or(Error::EmptyGraph)?;
    Ok((b, witness))
}

/// `b(v)` for every vertex.
pub fn orbit_per_vertex(g: &DirectedGraph) -> Result<Vec<usize>> {
    (0..g.n())
        .map(|v| shortest_cycle_through(g, v).ok_or(Error::NotStronglyConnected))
        .collect()
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> BigRational {
    (1..=n).fold(BigRational::zero(), |acc, i| acc + BigRational::new(BigInt::one(), BigInt::from(i)))
}

fn check_ruin_args(n: u64, b: u64) -> Result<()> {
    if n < 2 || b < 2 {
        return Err(Error::InvalidArgument(format!(
            "gambler's ruin needs n >= 2 and b >= 2, got n = {n}, b = {b}"
        )));
    }
    Ok(())
}

/// `e_1 = n b (b - 1) / 2`.
pub fn gamblers_ruin_closed(n: u64, b: u64) -> Result<BigRational> {
    check_ruin_args(n, b)?;
    Ok(BigRational::from_integer(BigInt::from(n) * b * (b - 1) / 2u32))
}

/// Solves the expected-time recurrence for a walk on `{1, ..., b}` where
/// each round moves up or down with probability `1/n` each (only up from 1)
/// and stops at `b`. Entry `k - 1` holds `e_k`; the last entry is `e_b = 0`.
pub fn gamblers_ruin_solve(n: u64, b: u64) -> Result<Vec<BigRational>> {
    check_ruin_args(n, b)?;
    let m = (b - 1) as usize; // unknowns e_1 .. e_{b-1}
    let r = |num: u64| BigRational::new(BigInt::from(num), BigInt::from(n));
    let mut a = vec![vec![BigRational::zero(); m]; m];
    let rhs = vec![BigRational::one(); m];
    // e_1 = 1 + (1/n) e_2 + ((n-1)/n) e_1
    a[0][0] = BigRational::one() - r(n - 1);
    if m > 1 {
        a[0][1] = -r(1);
    }
    // e_j = 1 + (1/n) e_{j+1} + (1/n) e_{j-1} + ((n-2)/n) e_j
    for i in 1..m {
        a[i][i] = BigRational::one() - r(n - 2);
        a[i][i - 1] = -r(1);
        if i + 1 < m {
            a[i][i + 1] = -r(1);
        }
    }
    let mut e = linalg::solve_exact(a, rhs).ok_or_else(|| Error::InvalidArgument("singular system".into()))?;
    e.push(BigRational::zero());
    Ok(e)
}

/// An exact fraction with a float rendering.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fraction {
    pub num: i64,
    pub den: i64,
    pub value: f64,
}

impl From<Rational64> for Fraction {
    fn from(r: Rational64) -> Self {
        Self {
            num: *r.numer(),
            den: *r.denom(),
            value: *r.numer() as f64 / *r.denom() as f64,
        }
    }
}

fn serialize_fraction<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    Fraction::from(*r).serialize(s)
}

/// Every parameter of a strongly connected graph plus the two bound shapes,
/// evaluated with constant 1 and the natural logarithm. The bounds are
/// growth-rate predictors, not certified constants.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParamReport {
    pub n: usize,
    pub min_out_degree: usize,
    pub rounding: HalfRounding,
    pub phi_out: Expansion,
    pub phi_in: Expansion,
    #[serde(serialize_with = "serialize_fraction")]
    pub phi_prime: Rational64,
    pub orbit_b: usize,
    pub orbit_witness: usize,
    pub undirected: bool,
    /// `n / φ · ln n`, using `φ_out`.
    pub bound_undirected: f64,
    /// `n b² + n / φ′ · ln n`.
    pub bound_strongly_connected: f64,
}

pub fn bound_report(g: &DirectedGraph) -> Result<ParamReport> {
    bound_report_with(g, DEFAULT_EXPANSION_CAP, HalfRounding::Floor)
}

pub fn bound_report_with(g: &DirectedGraph, cap: usize, rounding: HalfRounding) -> Result<ParamReport> {
    let (orbit_b, orbit_witness) = orbit(g)?;
    let phi_out = vertex_expansion_with(g, cap, rounding)?;
    let phi_in = vertex_expansion_with(&g.dual(), cap, rounding)?;
    let phi_prime = phi_out.value.min(phi_in.value);
    let n = g.n() as f64;
    let as_f64 = |r: Rational64| *r.numer() as f64 / *r.denom() as f64;
    Ok(ParamReport {
        n: g.n(),
        min_out_degree: g.min_out_degree(),
        rounding,
        bound_undirected: n / as_f64(phi_out.value) * n.ln(),
        bound_strongly_connected: n * (orbit_b * orbit_b) as f64 + n / as_f64(phi_prime) * n.ln(),
        phi_out,
        phi_in,
        phi_prime,
        orbit_b,
        orbit_witness,
        undirected: g.is_undirected(),
    })
}
