//! Asynchronous maximum dynamics on directed graphs.
//!
//! Each round a uniformly random vertex takes the maximum value among its
//! out-neighbours. The crate simulates the process, analyses its Markov chain
//! of possibilities exactly on small graphs, estimates convergence times by
//! Monte Carlo on larger ones, and computes the graph parameters that govern
//! how fast it converges.
//!
//! ```
//! use maxdyn::{markov, DirectedGraph, Family, Valuation};
//!
//! let path = DirectedGraph::generate(Family::Path, 4)?;
//! let f: Valuation = "2 2 1 1".parse()?;
//! let t = markov::exact_convergence_time(&path, &f, 10_000)?;
//! assert_eq!(t.exact.unwrap().to_string(), "8");
//! # Ok::<(), maxdyn::Error>(())
//! ```

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod gallery;
pub mod graph;
mod linalg;
pub mod markov;
pub mod params;
pub mod valuation;

pub use dynamics::{RngStream, Trajectory};
pub use error::{Error, Result};
pub use graph::{DirectedGraph, Family, SccDecomposition, VertexSet};
pub use markov::{ChainMode, ChainModel, HittingTimeReport};
pub use params::ParamReport;
pub use valuation::{OrderClass, Valuation};
