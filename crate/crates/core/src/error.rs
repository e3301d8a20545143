use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("family {family} requires n >= {min}, got {n}")]
    FamilyTooSmall {
        family: &'static str,
        min: usize,
        n: usize,
    },
    #[error("vertex set must be non-empty")]
    EmptySet,
    #[error("graph is not strongly connected")]
    NotStronglyConnected,
    #[error("graph is not undirected: edge ({0}, {1}) has no reverse")]
    NotUndirected(usize, usize),
    #[error("valuation has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("valuation values must be positive integers")]
    NonPositiveValue,
    #[error("{what} requires {needed} but the cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: String,
        cap: u64,
    },
    #[error("{what} budget of {budget} exceeded")]
    BudgetExceeded { what: &'static str, budget: u64 },
    #[error("state {0} cannot reach an absorbing component")]
    NonAbsorbingReachability(usize),
    #[error("transition row {row} is invalid: {reason}")]
    InvalidChain { row: usize, reason: String },
    #[error("invalid probability: {0}")]
    InvalidProbability(String),
    #[error("could not sample a strongly connected graph after {0} attempts")]
    SamplingFailed(usize),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("residual {residual:e} exceeds tolerance {tolerance:e}")]
    Residual { residual: f64, tolerance: f64 },
}

impl Error {
    pub(crate) fn cap(what: &'static str, needed: impl ToString, cap: u64) -> Self {
        Error::CapExceeded {
            what,
            needed: needed.to_string(),
            cap,
        }
    }
}
