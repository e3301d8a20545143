//! Small worked examples used throughout the docs, tests and examples.
//!
//! Vertex ids follow the order in which the vertices are usually drawn
//! (A = 0, B = 1, ...).

use num_rational::Rational64;

use crate::graph::DirectedGraph;
use crate::valuation::Valuation;

fn graph(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
    DirectedGraph::from_edges(n, edges.iter().copied()).expect("gallery graph is valid")
}

fn undirected(n: usize, edges: &[(usize, usize)]) -> DirectedGraph {
    DirectedGraph::undirected(n, edges.iter().copied()).expect("gallery graph is valid")
}

fn valuation(values: &[u64]) -> Valuation {
    Valuation::new(values.to_vec()).expect("gallery valuation is valid")
}

/// Undirected graph on six vertices with eight edges.
pub fn six_vertex_undirected() -> DirectedGraph {
    undirected(
        6,
        &[(0, 1), (0, 2), (2, 3), (1, 3), (2, 4), (4, 5), (3, 5), (4, 3)],
    )
}

/// Three vertices hold the maximum 5; two of them are adjacent.
pub fn six_vertex_valuation() -> Valuation {
    valuation(&[5, 5, 3, 4, 5, 2])
}

/// Same graph, but the unique maximum 6 sits alone.
pub fn six_vertex_isolated_max() -> Valuation {
    valuation(&[5, 5, 3, 4, 5, 6])
}

/// Undirected graph on ten vertices; vertex 0 holds the maximum under
/// [`ten_vertex_valuation`] and is at distance at most 2 from everything.
pub fn ten_vertex_undirected() -> DirectedGraph {
    undirected(
        10,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (1, 4),
            (1, 5),
            (1, 6),
            (2, 6),
            (2, 7),
            (7, 8),
            (8, 9),
            (2, 8),
            (3, 9),
        ],
    )
}

/// Strongly connected digraph on ten vertices whose reversal reaches every
/// vertex from vertex 0 in at most two steps.
pub fn ten_vertex_directed() -> DirectedGraph {
    graph(
        10,
        &[
            (1, 0),
            (2, 1),
            (2, 0),
            (3, 0),
            (4, 1),
            (5, 1),
            (6, 1),
            (6, 2),
            (7, 2),
            (8, 7),
            (9, 8),
            (8, 2),
            (9, 3),
            (0, 9),
            (7, 6),
            (6, 5),
            (5, 4),
        ],
    )
}

/// [`ten_vertex_directed`] with every edge reversed, written out directly.
pub fn ten_vertex_directed_reversed() -> DirectedGraph {
    graph(
        10,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (0, 3),
            (1, 4),
            (1, 5),
            (1, 6),
            (2, 6),
            (2, 7),
            (7, 8),
            (8, 9),
            (2, 8),
            (3, 9),
            (9, 0),
            (6, 7),
            (5, 6),
            (4, 5),
        ],
    )
}

pub fn ten_vertex_valuation() -> Valuation {
    valuation(&[10, 9, 1, 3, 2, 4, 6, 5, 7, 8])
}

/// A root with edges to two leaves. Weakly but not strongly connected.
pub fn rooted_fork() -> DirectedGraph {
    graph(3, &[(0, 1), (0, 2)])
}

/// Absorbing yet not constant on [`rooted_fork`].
pub fn rooted_fork_valuation() -> Valuation {
    valuation(&[2, 2, 1])
}

/// Hexagon A..F with a triangle G -> I -> H -> G hanging off C and feeding D.
pub fn nine_vertex_directed() -> DirectedGraph {
    graph(
        9,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 4),
            (4, 5),
            (5, 0),
            (2, 6),
            (7, 6),
            (8, 7),
            (6, 8),
            (6, 3),
        ],
    )
}

pub fn nine_vertex_valuation() -> Valuation {
    valuation(&[6, 5, 4, 3, 2, 1, 5, 2, 3])
}

/// Seven updates after which the triangle holds the maximum and the
/// strong cycle set has six vertices.
pub fn nine_vertex_schedule() -> Vec<usize> {
    vec![0, 2, 7, 6, 8, 6, 3]
}

/// Undirected graph on four vertices: a triangle 0, 1, 2 with a pendant 3
/// attached to 2. Swapping 0 and 1 is an automorphism.
pub fn four_vertex_undirected() -> DirectedGraph {
    undirected(4, &[(0, 1), (0, 2), (2, 1), (2, 3)])
}

/// Ranks of 1/2, 1/3, sqrt 2 and 15, scaled to integers.
pub fn four_vertex_scaled_reals() -> Valuation {
    valuation(&[500, 333, 1414, 15000])
}

pub fn four_vertex_increasing() -> Valuation {
    valuation(&[1, 2, 3, 4])
}

/// State names of [`eight_state_chain`], by index.
pub const EIGHT_STATE_NAMES: [&str; 8] = ["f", "g", "h", "a", "b", "c", "d", "e"];

/// A generic eight-state Markov chain given as `(from, to, probability)`.
///
/// `{f, g, b}` is transient; `{e}` and the 4-cycle `{h, a, c, d}` absorb.
pub fn eight_state_chain() -> Vec<(usize, usize, Rational64)> {
    let r = Rational64::new;
    let (f, g, h, a, b, c, d, e) = (0, 1, 2, 3, 4, 5, 6, 7);
    vec![
        (f, b, r(1, 2)),
        (f, f, r(1, 2)),
        (g, f, r(1, 4)),
        (g, h, r(1, 8)),
        (g, g, r(5, 8)),
        (h, c, r(1, 2)),
        (h, d, r(1, 2)),
        (a, h, r(1, 3)),
        (a, a, r(2, 3)),
        (b, e, r(2, 3)),
        (b, g, r(1, 3)),
        (c, d, r(1, 1)),
        (d, a, r(1, 1)),
        (e, e, r(1, 1)),
    ]
}
