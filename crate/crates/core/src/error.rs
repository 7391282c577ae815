//! Error type shared across the library.

/// Errors produced by spaces, systems, indices, planners, and the harness.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("bound on axis {axis} must be finite for this operation")]
    InfiniteBound { axis: usize },

    #[error("integration produced a non-finite state at t={t}: {state:?}")]
    IntegrationDiverged { t: f64, state: Vec<f64> },

    #[error("query on an empty index")]
    EmptyIndex,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("fixture parse error at line {line}: {message}")]
    FixtureParse { line: usize, message: String },

    #[error("fixture file not found: {0}")]
    FixtureMissing(String),

    #[error("unknown problem '{0}'")]
    UnknownProblem(String),

    #[error("unknown planner '{0}'")]
    UnknownPlanner(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
