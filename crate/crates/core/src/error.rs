use thiserror::Error;

/// Failures raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("discretization too coarse: {requested} nodes per component requested, at least {minimum} required")]
    TooCoarse { requested: usize, minimum: usize },

    #[error("degenerate discretization: {0}")]
    Degenerate(String),

    #[error("point coincides with boundary node {node}; the discrete Green's function is undefined there")]
    OnBoundary { node: usize },

    #[error("no sign change of g' found in gap {gap} ({left}, {right}); equilibrium under-resolved")]
    NoCriticalPoint { gap: usize, left: f64, right: f64 },

    #[error("Remez exchange stagnated after {iterations} iterations (levelling gap {gap:e})")]
    Stagnation { iterations: usize, gap: f64 },

    #[error("linear program failure: {0}")]
    Lp(String),

    #[error("unsupported system: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
