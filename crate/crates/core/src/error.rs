use thiserror::Error;

/// Errors produced while ingesting data or building leading trees.
#[derive(Debug, Error)]
pub enum GltError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {label:?}")]
    SelfLoop { line: usize, label: String },

    #[error("line {line}: negative edge weight {weight}")]
    NegativeWeight { line: usize, weight: f64 },

    #[error("vertex id {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{backend} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        backend: &'static str,
        iterations: usize,
        residual: f64,
    },

    #[error("importance table has {importance} entries but distance matrix has {distance}")]
    SizeMismatch { importance: usize, distance: usize },

    #[error("importance score of granule {granule} is NaN")]
    NanImportance { granule: usize },

    #[error("distance between granules {0} and {1} is NaN")]
    NanDistance(usize, usize),

    #[error("cannot cut into {k} communities: forest has {roots} roots")]
    TooFewCenters { k: usize, roots: usize },

    #[error("invalid forest: {0}")]
    InvalidForest(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = GltError> = std::result::Result<T, E>;
