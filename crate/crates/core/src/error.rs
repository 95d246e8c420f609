use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("vertex sets overlap at vertex {0}")]
    OverlappingSets(usize),
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("malformed edge list: {0}")]
    Parse(String),
}

/// Failures of the exact and sampled graph-property checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("inconclusive by policy: {what} needs {n} vertices but the exact cap is {cap}")]
    SizeCapExceeded { what: &'static str, n: usize, cap: usize },
    #[error("exact enumeration needs {needed} subsets, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("boosters are only defined here for non-Hamiltonian graphs")]
    HamiltonianInput,
    #[error("n = {0} is too small for the iterated logarithms (need n >= 16)")]
    TooSmall(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
