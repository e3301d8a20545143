//! Valuations: positive integer labels on vertices.
//!
//! Only the relative order of the values matters to the dynamics, so every
//! valuation can be rank-compressed into a canonical one whose distinct
//! values are exactly `{1, ..., k}`.

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, VertexSet};

/// Default length cap for [`enumerate_canonical`].
pub const DEFAULT_ENUMERATION_CAP: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct Valuation(Vec<u64>);

impl Valuation {
    pub fn new(values: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyGraph);
        }
        if values.contains(&0) {
            return Err(Error::NonPositiveValue);
        }
        Ok(Self(values))
    }

    pub fn constant(n: usize, k: u64) -> Result<Self> {
        Self::new(vec![k; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, v: usize) -> u64 {
        self.0[v]
    }

    pub(crate) fn set(&mut self, v: usize, value: u64) {
        debug_assert!(value >= 1);
        self.0[v] = value;
    }

    pub fn max_value(&self) -> u64 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// Vertices holding the maximum value.
    pub fn argmax(&self) -> VertexSet {
        let m = self.max_value();
        self.0
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == m)
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_constant(&self) -> bool {
        self.0.iter().all_equal()
    }

    /// Order-preserving rank compression onto `{1, ..., k}`.
    pub fn canonicalize(&self) -> Valuation {
        let distinct: Vec<u64> = self.0.iter().copied().sorted_unstable().dedup().collect();
        Valuation(
            self.0
                .iter()
                .map(|x| distinct.binary_search(x).map(|r| r as u64 + 1).unwrap_or(0))
                .collect(),
        )
    }

    pub fn is_canonical(&self) -> bool {
        let distinct: Vec<u64> = self.0.iter().copied().sorted_unstable().dedup().collect();
        distinct.iter().zip(1u64..).all(|(&x, r)| x == r)
    }

    /// Checks that this valuation is sized for `g`.
    pub fn check_for(&self, g: &DirectedGraph) -> Result<()> {
        if self.len() == g.n() {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: g.n(),
                got: self.len(),
            })
        }
    }

    /// 64-bit FNV-1a digest of the values, stable across platforms and runs.
    pub fn digest(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        self.0
            .iter()
            .flat_map(|x| x.to_le_bytes())
            .fold(OFFSET, |h, b| (h ^ u64::from(b)).wrapping_mul(PRIME))
    }
}

impl TryFrom<Vec<u64>> for Valuation {
    type Error = Error;

    fn try_from(values: Vec<u64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<Valuation> for Vec<u64> {
    fn from(f: Valuation) -> Self {
        f.0
    }
}

/// Parses whitespace- or comma-separated positive integers.
impl FromStr for Valuation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>().map_err(|e| Error::Parse {
                    line: 1,
                    msg: format!("`{t}`: {e}"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }
}

/// The valuation text format: values separated by single spaces.
impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.iter().join(" "))
    }
}

/// The equivalence class of all valuations with the same pairwise order,
/// represented by its canonical member.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderClass {
    canonical: Valuation,
}

impl OrderClass {
    pub fn of(f: &Valuation) -> Self {
        Self {
            canonical: f.canonicalize(),
        }
    }

    pub fn canonical(&self) -> &Valuation {
        &self.canonical
    }
}

/// Whether some automorphism `α` of `g` satisfies
/// `cmp(f(u), f(v)) == cmp(h(α(u)), h(α(v)))` for all vertex pairs.
///
/// Brute force over all `n!` permutations; fails with `BudgetExceeded` when
/// `n!` is larger than `automorphism_budget`.
pub fn order_equivalent(
    g: &DirectedGraph,
    f: &Valuation,
    h: &Valuation,
    automorphism_budget: u64,
) -> Result<bool> {
    f.check_for(g)?;
    h.check_for(g)?;
    let n = g.n();
    let factorial = (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k));
    if factorial.is_none_or(|c| c > automorphism_budget) {
        return Err(Error::BudgetExceeded {
            what: "automorphism search",
            budget: automorphism_budget,
        });
    }
    // Cheap necessary condition: identical rank multisets.
    let fc = f.canonicalize().0.into_iter().sorted_unstable().collect_vec();
    let hc = h.canonicalize().0.into_iter().sorted_unstable().collect_vec();
    if fc != hc {
        return Ok(false);
    }
    let preserves_order = |alpha: &[usize]| {
        (0..n).all(|u| {
            (0..n).all(|v| {
                f.get(u).cmp(&f.get(v)) == h.get(alpha[u]).cmp(&h.get(alpha[v]))
            })
        })
    };
    let is_automorphism = |alpha: &[usize]| g.edges().all(|(u, v)| g.has_edge(alpha[u], alpha[v]));
    Ok((0..n)
        .permutations(n)
        .any(|alpha| preserves_order(&alpha) && is_automorphism(&alpha)))
}

/// Lexicographic stream of all canonical valuations of length `n`.
pub fn enumerate_canonical(n: usize, cap: usize) -> Result<CanonicalValuations> {
    if n > cap {
        return Err(Error::cap("canonical enumeration", format!("n = {n}"), cap as u64));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Ok(CanonicalValuations {
        n,
        next: Some(vec![1; n]),
    })
}

/// Number of canonical valuations of length `n` (ordered set partitions).
pub fn canonical_count(n: usize) -> u128 {
    // a(n) = sum_{k=1..n} C(n, k) a(n - k), a(0) = 1
    let mut a = vec![1u128; n + 1];
    for m in 1..=n {
        let mut binom = 1u128;
        let mut total = 0u128;
        for k in 1..=m {
            binom = binom * (m - k + 1) as u128 / k as u128;
            total = total.saturating_add(binom.saturating_mul(a[m - k]));
        }
        a[m] = total;
    }
    a[n]
}

pub struct CanonicalValuations {
    n: usize,
    next: Option<Vec<u64>>,
}

impl CanonicalValuations {
    /// Smallest-suffix completion of `prefix` to length `n` with no value gaps,
    /// or `None` if the gaps below the prefix maximum cannot all be filled.
    fn complete(prefix: &[u64], n: usize) -> Option<Vec<u64>> {
        let top = prefix.iter().copied().max().unwrap_or(0);
        let missing: Vec<u64> = (1..=top).filter(|x| !prefix.contains(x)).collect();
        let remaining = n - prefix.len();
        if missing.len() > remaining {
            return None;
        }
        let mut out = prefix.to_vec();
        out.extend(std::iter::repeat_n(1, remaining - missing.len()));
        out.extend(missing);
        Some(out)
    }

    fn successor(&self, cur: &[u64]) -> Option<Vec<u64>> {
        let n = self.n;
        (0..n).rev().find_map(|i| {
            (cur[i] + 1..=n as u64).find_map(|x| {
                let mut prefix = cur[..i].to_vec();
                prefix.push(x);
                Self::complete(&prefix, n)
            })
        })
    }
}

impl Iterator for CanonicalValuations {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        let cur = self.next.take()?;
        self.next = self.successor(&cur);
        Some(Valuation(cur))
    }
}

/// Compares two valuations by their induced vertex orders only.
pub fn same_order(f: &Valuation, h: &Valuation) -> bool {
    f.len() == h.len()
        && (0..f.len()).all(|u| {
            (0..f.len()).all(|v| f.get(u).cmp(&f.get(v)) == h.get(u).cmp(&h.get(v)))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::graph::Family;

    fn val(v: &[u64]) -> Valuation {
        Valuation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn constants() {
        assert_eq!(Valuation::constant(3, 1).unwrap(), val(&[1, 1, 1]));
        assert_eq!(Valuation::constant(4, 4).unwrap(), val(&[4, 4, 4, 4]));
        assert_eq!(Valuation::constant(1, 7).unwrap(), val(&[7]));
        assert_eq!(Valuation::constant(2, 0), Err(Error::NonPositiveValue));
    }

    #[test]
    fn maxima() {
        assert_eq!(val(&[2, 2, 1, 1]).max_value(), 2);
        assert_eq!(gallery::six_vertex_valuation().max_value(), 5);
        assert_eq!(val(&[7]).max_value(), 7);
        assert_eq!(val(&[2, 2, 1, 1]).argmax(), VertexSet::from([0, 1]));
    }

    #[test]
    fn canonicalize_examples() {
        // 1/2, 1/3, sqrt 2, 15 scaled by 1000
        assert_eq!(val(&[500, 333, 1414, 15000]).canonicalize(), val(&[2, 1, 3, 4]));
        assert_eq!(val(&[5, 5, 3, 4, 5, 2]).canonicalize(), val(&[4, 4, 2, 3, 4, 1]));
        assert_eq!(val(&[1, 1, 1]).canonicalize(), val(&[1, 1, 1]));
        assert!(val(&[2, 1, 2]).is_canonical());
        assert!(!val(&[3, 1, 3]).is_canonical());
    }

    #[test]
    fn order_equivalence_examples() {
        let g = gallery::four_vertex_undirected();
        let f = val(&[500, 333, 1414, 15000]);
        let h = val(&[1, 2, 3, 4]);
        assert!(order_equivalent(&g, &f, &h, 1_000).unwrap());
        // identity alone does not work: vertices 0 and 1 are swapped in rank
        assert!(!same_order(&f, &h));

        let c3 = DirectedGraph::generate(Family::Dicycle, 3).unwrap();
        assert!(order_equivalent(&c3, &val(&[3, 1, 2]), &val(&[3, 1, 2]), 6).unwrap());
        assert!(!order_equivalent(&c3, &val(&[1, 2, 3]), &val(&[1, 1, 2]), 6).unwrap());
        // rotations of the cycle are automorphisms
        assert!(order_equivalent(&c3, &val(&[1, 2, 3]), &val(&[3, 1, 2]), 6).unwrap());
        assert_eq!(
            order_equivalent(&c3, &val(&[1, 2, 3]), &val(&[1, 2, 3]), 5),
            Err(Error::BudgetExceeded {
                what: "automorphism search",
                budget: 5
            })
        );
    }

    /// Brute force: canonicalize all `n^n` raw valuations and dedupe.
    fn canonical_by_filter(n: usize) -> Vec<Valuation> {
        (0..n)
            .map(|_| 1..=n as u64)
            .multi_cartesian_product()
            .map(|v| val(&v).canonicalize())
            .sorted()
            .dedup()
            .collect()
    }

    #[test]
    fn enumeration_matches_filter_oracle() {
        assert_eq!(enumerate_canonical(1, 6).unwrap().collect_vec(), vec![val(&[1])]);
        assert_eq!(
            enumerate_canonical(2, 6).unwrap().collect_vec(),
            vec![val(&[1, 1]), val(&[1, 2]), val(&[2, 1])]
        );
        assert_eq!(enumerate_canonical(3, 6).unwrap().count(), 13);
        for n in 1..=5 {
            let direct = enumerate_canonical(n, 6).unwrap().collect_vec();
            assert_eq!(direct, canonical_by_filter(n), "n = {n}");
            assert_eq!(direct.len() as u128, canonical_count(n));
        }
        assert_eq!(enumerate_canonical(6, 6).unwrap().count(), 4683);
        assert!(matches!(enumerate_canonical(7, 6), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn text_format() {
        let f: Valuation = "2 2 1 1".parse().unwrap();
        assert_eq!(f, val(&[2, 2, 1, 1]));
        assert_eq!("2,2,1,1".parse::<Valuation>().unwrap(), f);
        assert_eq!(f.to_string(), "2 2 1 1");
        assert!("2 0 1".parse::<Valuation>().is_err());
        assert!("2 x".parse::<Valuation>().is_err());
    }

    #[test]
    fn digest_is_value_sensitive() {
        assert_eq!(val(&[1, 2]).digest(), val(&[1, 2]).digest());
        assert_ne!(val(&[1, 2]).digest(), val(&[2, 1]).digest());
    }

    #[test]
    fn order_equivalence_is_an_equivalence_on_small_graphs() {
        for n in 1..=3usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let vals = (0..n)
                .map(|_| 1..=n as u64)
                .multi_cartesian_product()
                .map(|v| val(&v))
                .collect_vec();
            for mask in 0u32..(1 << pairs.len()) {
                let g = DirectedGraph::from_edges(
                    n,
                    pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e),
                )
                .unwrap();
                let eq = |a: &Valuation, b: &Valuation| order_equivalent(&g, a, b, 720).unwrap();
                for a in &vals {
                    assert!(eq(a, a));
                    assert!(eq(a, &a.canonicalize()));
                    for b in &vals {
                        let ab = eq(a, b);
                        assert_eq!(ab, eq(b, a));
                        if ab {
                            for c in &vals {
                                if eq(b, c) {
                                    assert!(eq(a, c));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}
