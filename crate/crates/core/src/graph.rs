//! Simple directed graphs, the standard families, boundaries and strongly
//! connected components.
//!
//! Undirected graphs are encoded as bidirected digraphs: every edge `{u, v}`
//! is stored as both `(u, v)` and `(v, u)`. Vertex ids are dense, 0-based.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A set of vertex ids (or of chain state ids).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(BTreeSet<usize>);

impl VertexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.contains(&v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        self.0.insert(v)
    }

    pub fn remove(&mut self, v: usize) -> bool {
        self.0.remove(&v)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        VertexSet(iter.into_iter().collect())
    }
}

impl<const N: usize> From<[usize; N]> for VertexSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Named graph families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// Undirected complete graph `K_n`.
    Complete,
    /// Undirected path `P_n` on vertices `0 - 1 - ... - (n-1)`.
    Path,
    /// Directed cycle `0 -> 1 -> ... -> (n-1) -> 0`.
    Dicycle,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Complete => "complete",
            Family::Path => "path",
            Family::Dicycle => "dicycle",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::Complete => 1,
            Family::Path => 2,
            Family::Dicycle => 3,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(Family::Complete),
            "path" => Ok(Family::Path),
            "dicycle" => Ok(Family::Dicycle),
            other => Err(Error::InvalidArgument(format!("unknown family `{other}`"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A simple directed graph stored as sorted out-adjacency lists.
///
/// No self-loops, no parallel edges, all ids in `[0, n)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DirectedGraph {
    out_adj: Vec<Vec<usize>>,
}

impl DirectedGraph {
    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            sets[u].insert(v);
        }
        Ok(Self {
            out_adj: sets.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// Builds an undirected (bidirected) graph: each pair is inserted in both directions.
    pub fn undirected<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Self::from_edges(n, edges.into_iter().flat_map(|(u, v)| [(u, v), (v, u)]))
    }

    pub fn generate(family: Family, n: usize) -> Result<Self> {
        if n < family.min_n() {
            return Err(Error::FamilyTooSmall {
                family: family.name(),
                min: family.min_n(),
                n,
            });
        }
        match family {
            Family::Complete => Self::from_edges(
                n,
                (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v))),
            ),
            Family::Path => Self::undirected(n, (1..n).map(|v| (v - 1, v))),
            Family::Dicycle => Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))),
        }
    }

    pub fn n(&self) -> usize {
        self.out_adj.len()
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn min_out_degree(&self) -> usize {
        self.out_adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.out_adj[u].binary_search(&v).is_ok()
    }

    /// All edges in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    pub fn in_adjacency(&self) -> Vec<Vec<usize>> {
        let mut inn = vec![Vec::new(); self.n()];
        for (u, v) in self.edges() {
            inn[v].push(u);
        }
        inn
    }

    /// The reversed-edge graph.
    pub fn dual(&self) -> DirectedGraph {
        DirectedGraph {
            out_adj: self.in_adjacency(),
        }
    }

    /// Returns the first edge without a reverse, if any.
    pub fn unpaired_edge(&self) -> Option<(usize, usize)> {
        self.edges().find(|&(u, v)| !self.has_edge(v, u))
    }

    pub fn is_undirected(&self) -> bool {
        self.unpaired_edge().is_none()
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    fn check_set(&self, s: &VertexSet) -> Result<()> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        s.iter().try_for_each(|v| self.check_vertex(v))
    }

    /// Out-neighbours of `s` that are not themselves in `s`.
    pub fn boundary(&self, s: &VertexSet) -> Result<VertexSet> {
        self.check_set(s)?;
        Ok(s.iter()
            .flat_map(|u| self.out_adj[u].iter().copied())
            .filter(|&v| !s.contains(v))
            .collect())
    }

    /// BFS distance layers from `s` along out-edges: `[s, Γ(s), Γ²(s), ...]`.
    ///
    /// Every vertex must be reachable from `s` and the graph must be strongly
    /// connected, otherwise the levels would not partition `V`.
    pub fn k_boundary_partition(&self, s: &VertexSet) -> Result<Vec<VertexSet>> {
        self.check_set(s)?;
        if !self.is_strongly_connected() {
            return Err(Error::NotStronglyConnected);
        }
        let dist = self.bfs_distances(s.iter());
        let depth = dist.iter().flatten().copied().max().unwrap_or(0);
        let mut levels = vec![VertexSet::new(); depth + 1];
        for (v, d) in dist.into_iter().enumerate() {
            let d = d.ok_or(Error::NotStronglyConnected)?;
            levels[d].insert(v);
        }
        Ok(levels)
    }

    /// Multi-source BFS along out-edges.
    pub fn bfs_distances(&self, sources: impl IntoIterator<Item = usize>) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        let mut queue = VecDeque::new();
        for s in sources {
            if dist[s].is_none() {
                dist[s] = Some(0);
                queue.push_back(s);
            }
        }
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap_or(0);
            for &v in &self.out_adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    pub fn scc(&self) -> SccDecomposition {
        SccDecomposition::of_adjacency(&self.out_adj)
    }

    pub fn is_strongly_connected(&self) -> bool {
        // Forward and backward reachability from vertex 0.
        let all = |d: Vec<Option<usize>>| d.iter().all(Option::is_some);
        all(self.bfs_distances([0])) && all(self.dual().bfs_distances([0]))
    }

    /// Renders the edge-list text format: `n m` followed by one `u v` per line.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Parses the edge-list text format. `#` starts a comment; blank lines are skipped.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let [n, m] = parse_pair(line, header)?;
        let mut edges = Vec::with_capacity(m);
        for (line, l) in lines {
            edges.push(parse_pair(line, l).map(|[u, v]| (u, v))?);
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line,
                msg: format!("header declares {m} edges, found {}", edges.len()),
            });
        }
        Self::from_edges(n, edges)
    }
}

fn parse_pair(line: usize, text: &str) -> Result<[usize; 2]> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected two integers, got `{text}`"),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|e| Error::Parse {
            line,
            msg: format!("`{s}`: {e}"),
        })
    };
    Ok([parse(parts[0])?, parse(parts[1])?])
}

/// Samples a strongly connected digraph by rejection: each ordered pair is an
/// edge independently with probability `edge_prob`.
pub fn random_strongly_connected<R: Rng + ?Sized>(
    n: usize,
    edge_prob: f64,
    rng: &mut R,
) -> Result<DirectedGraph> {
    const ATTEMPTS: usize = 100_000;
    if !(0.0..=1.0).contains(&edge_prob) || edge_prob == 0.0 && n > 1 {
        return Err(Error::InvalidProbability(format!("edge probability {edge_prob}")));
    }
    for _ in 0..ATTEMPTS {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(edge_prob))
            .collect();
        let g = DirectedGraph::from_edges(n, edges)?;
        if g.is_strongly_connected() {
            return Ok(g);
        }
    }
    Err(Error::SamplingFailed(ATTEMPTS))
}

/// Samples a connected undirected graph by rejection from `G(n, p)`.
pub fn random_connected_undirected<R: Rng + ?Sized>(
    n: usize,
    edge_prob: f64,
    rng: &mut R,
) -> Result<DirectedGraph> {
    const ATTEMPTS: usize = 100_000;
    if !(0.0..=1.0).contains(&edge_prob) || edge_prob == 0.0 && n > 1 {
        return Err(Error::InvalidProbability(format!("edge probability {edge_prob}")));
    }
    for _ in 0..ATTEMPTS {
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|_| rng.random_bool(edge_prob))
            .collect();
        let g = DirectedGraph::undirected(n, edges)?;
        if g.is_strongly_connected() {
            return Ok(g);
        }
    }
    Err(Error::SamplingFailed(ATTEMPTS))
}

/// Maximal strongly connected components and their condensation.
///
/// Components are numbered in reverse topological order of the condensation:
/// every condensation edge `(a, b)` satisfies `a > b`, so sink components
/// come first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SccDecomposition {
    pub components: Vec<VertexSet>,
    pub component_of: Vec<usize>,
    pub condensation_edges: Vec<(usize, usize)>,
}

impl SccDecomposition {
    /// Iterative Tarjan over arbitrary adjacency lists. Self-loops are allowed
    /// and ignored.
    pub fn of_adjacency(adj: &[Vec<usize>]) -> Self {
        const UNVISITED: usize = usize::MAX;
        let n = adj.len();
        let mut index = vec![UNVISITED; n];
        let mut lowlink = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut component_of = vec![UNVISITED; n];
        let mut components = Vec::new();
        let mut next_index = 0;
        // (vertex, position in its adjacency list)
        let mut call: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if index[root] != UNVISITED {
                continue;
            }
            call.push((root, 0));
            index[root] = next_index;
            lowlink[root] = next_index;
            next_index += 1;
            stack.push(root);
            on_stack[root] = true;

            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = adj[v].get(*pos) {
                    *pos += 1;
                    if index[w] == UNVISITED {
                        index[w] = next_index;
                        lowlink[w] = next_index;
                        next_index += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        lowlink[v] = lowlink[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    lowlink[parent] = lowlink[parent].min(lowlink[v]);
                }
                if lowlink[v] == index[v] {
                    let id = components.len();
                    let mut comp = VertexSet::new();
                    while let Some(w) = stack.pop() {
                        on_stack[w] = false;
                        component_of[w] = id;
                        comp.insert(w);
                        if w == v {
                            break;
                        }
                    }
                    components.push(comp);
                }
            }
        }

        let condensation_edges: BTreeSet<(usize, usize)> = adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
            .map(|(u, v)| (component_of[u], component_of[v]))
            .filter(|(a, b)| a != b)
            .collect();

        Self {
            components,
            component_of,
            condensation_edges: condensation_edges.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components with no outgoing condensation edge.
    pub fn sink_components(&self) -> Vec<usize> {
        let mut has_out = vec![false; self.components.len()];
        for &(a, _) in &self.condensation_edges {
            has_out[a] = true;
        }
        (0..self.components.len()).filter(|&c| !has_out[c]).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::ten_vertex_undirected;

    fn set(items: &[usize]) -> VertexSet {
        items.iter().copied().collect()
    }

    #[test]
    fn edge_list_examples() {
        let k2 = DirectedGraph::from_edges(2, [(0, 1), (1, 0)]).unwrap();
        assert!(k2.is_undirected());
        assert_eq!(k2, DirectedGraph::generate(Family::Complete, 2).unwrap());

        let c3 = DirectedGraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c3, DirectedGraph::generate(Family::Dicycle, 3).unwrap());

        assert_eq!(
            DirectedGraph::from_edges(2, [(0, 0)]),
            Err(Error::SelfLoop(0))
        );
        assert_eq!(
            DirectedGraph::from_edges(2, [(0, 2)]),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        );
        assert_eq!(DirectedGraph::from_edges(0, []), Err(Error::EmptyGraph));
    }

    #[test]
    fn duplicates_collapse() {
        let g = DirectedGraph::from_edges(3, [(0, 1), (0, 1), (1, 2)]).unwrap();
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn families() {
        assert_eq!(DirectedGraph::generate(Family::Complete, 3).unwrap().edge_count(), 6);
        let p4: Vec<_> = DirectedGraph::generate(Family::Path, 4).unwrap().edges().collect();
        assert_eq!(p4, vec![(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2)]);
        let c3: Vec<_> = DirectedGraph::generate(Family::Dicycle, 3).unwrap().edges().collect();
        assert_eq!(c3, vec![(0, 1), (1, 2), (2, 0)]);
        assert!(matches!(
            DirectedGraph::generate(Family::Dicycle, 2),
            Err(Error::FamilyTooSmall { .. })
        ));
        assert!(DirectedGraph::generate(Family::Path, 1).is_err());
        assert_eq!(DirectedGraph::generate(Family::Complete, 1).unwrap().n(), 1);
    }

    #[test]
    fn dual_examples() {
        let c3 = DirectedGraph::generate(Family::Dicycle, 3).unwrap();
        let reversed: Vec<_> = c3.dual().edges().collect();
        assert_eq!(reversed, vec![(0, 2), (1, 0), (2, 1)]);
        let p3 = DirectedGraph::generate(Family::Path, 3).unwrap();
        assert_eq!(p3.dual(), p3);
        assert_eq!(c3.dual().dual(), c3);
    }

    #[test]
    fn boundary_examples() {
        let p4 = DirectedGraph::generate(Family::Path, 4).unwrap();
        assert_eq!(p4.boundary(&set(&[0])).unwrap(), set(&[1]));
        let g = ten_vertex_undirected();
        // vertices valued 9, 1, 3
        assert_eq!(g.boundary(&set(&[0])).unwrap(), set(&[1, 2, 3]));
        let k4 = DirectedGraph::generate(Family::Complete, 4).unwrap();
        assert_eq!(k4.boundary(&set(&[0, 1])).unwrap(), set(&[2, 3]));
        assert_eq!(k4.boundary(&VertexSet::new()), Err(Error::EmptySet));
    }

    #[test]
    fn k_boundary_examples() {
        let p3 = DirectedGraph::generate(Family::Path, 3).unwrap();
        assert_eq!(
            p3.k_boundary_partition(&set(&[0])).unwrap(),
            vec![set(&[0]), set(&[1]), set(&[2])]
        );
        let sizes: Vec<_> = ten_vertex_undirected()
            .k_boundary_partition(&set(&[0]))
            .unwrap()
            .iter()
            .map(VertexSet::len)
            .collect();
        assert_eq!(sizes, vec![1, 3, 6]);
        let k5 = DirectedGraph::generate(Family::Complete, 5).unwrap();
        assert_eq!(
            k5.k_boundary_partition(&set(&[0])).unwrap(),
            vec![set(&[0]), set(&[1, 2, 3, 4])]
        );
        let one_way = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert_eq!(
            one_way.k_boundary_partition(&set(&[0])),
            Err(Error::NotStronglyConnected)
        );
    }

    #[test]
    fn scc_examples() {
        let c3 = DirectedGraph::generate(Family::Dicycle, 3).unwrap();
        assert_eq!(c3.scc().components, vec![set(&[0, 1, 2])]);
        assert!(c3.is_strongly_connected());

        let chain = DirectedGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let scc = chain.scc();
        assert_eq!(scc.len(), 3);
        assert!(scc.components.iter().all(|c| c.len() == 1));
        assert!(scc.condensation_edges.iter().all(|&(a, b)| a > b));
        assert!(!chain.is_strongly_connected());

        let one_way = DirectedGraph::from_edges(2, [(0, 1)]).unwrap();
        assert!(!one_way.is_strongly_connected());
        // root with two out-edges
        let rooted = DirectedGraph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        assert!(!rooted.is_strongly_connected());
    }

    #[test]
    fn edge_list_text_round_trip() {
        let g = ten_vertex_undirected();
        let text = format!("# ten vertices\n{}", g.to_edge_list());
        assert_eq!(DirectedGraph::parse_edge_list(&text).unwrap(), g);

        let parsed = DirectedGraph::parse_edge_list("3 2 # header\n0 1\n\n1 2 # tail\n").unwrap();
        assert_eq!(parsed.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert!(matches!(
            DirectedGraph::parse_edge_list("3 2\n0 1\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            DirectedGraph::parse_edge_list("3 1\n0 x\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
