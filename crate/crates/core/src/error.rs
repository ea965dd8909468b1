use std::path::PathBuf;

/// Errors produced by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("points are affinely dependent")]
    AffinelyDependent,

    #[error("circumradius {0} is not below 1; the unit spheres do not meet in a circle")]
    SpheresDoNotMeet(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("construction infeasible: {0}")]
    Infeasible(String),

    #[error("coloring is partial: {assigned} of {vertices} vertices assigned")]
    PartialColoring { assigned: usize, vertices: usize },

    #[error("malformed graph file: {0}")]
    MalformedGraph(String),

    #[error("graph too large for brute force: {0} vertices (max 12)")]
    TooManyVertices(usize),

    #[error("solver budget exhausted; chromatic number lies in [{lower}, {upper}]")]
    SolveTimeout { lower: usize, upper: usize },

    #[error("newton iteration failed: {0}")]
    NewtonFailed(String),

    #[error("targets outside the invertible neighborhood: predicted step {step:.3e} exceeds ball radius {radius:.3e}")]
    OutsideNeighborhood { step: f64, radius: f64 },

    #[error("cannot parse scalar {0:?}")]
    ParseScalar(String),

    #[error("i/o error on {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
