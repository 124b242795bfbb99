use thiserror::Error;

/// Errors from building, parsing or generating hypergraphs.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum HypergraphError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("validation error: {0}")]
    Validation(String),
    #[error("disconnected: no path between vertices {x} and {y}")]
    Disconnected { x: usize, y: usize },
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
}

/// Errors from the numerical machinery.
#[derive(Debug, Clone, Error)]
pub enum SolverError {
    /// Iteration budget exhausted before the certified gap reached its target.
    #[error("solver stopped at gap {gap:.3e} after {iterations} iterations (target {target:.3e})")]
    Budget {
        gap: f64,
        iterations: usize,
        target: f64,
    },
    #[error("hyperedge {edge} has {size} vertices; this operation requires a graph")]
    NotAGraph { edge: usize, size: usize },
    #[error("linear program failed: {0}")]
    Lp(String),
    /// λ-schedule exhausted without two consecutive estimates agreeing.
    /// Carries the raw (λ, estimate) table.
    #[error("curvature estimates did not stabilize: {estimates:?}")]
    NonStabilized { estimates: Vec<(f64, f64)> },
    #[error("unsupported hyperedge structure: {0}")]
    UnsupportedStructure(String),
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
