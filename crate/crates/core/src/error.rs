use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("invalid permutation: {0}")]
    BadPerm(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("empty permutation set")]
    EmptySet,
    #[error("permutation set is not uniform")]
    NotUniform,
    #[error("boring parity case: products cannot be cyclic, use the parity classification directly")]
    BoringCase,
    #[error("invalid graph: {0}")]
    BadGraph(String),
    #[error("graph is closed: it has no open factor")]
    ClosedGraph,
    #[error("graph has unsaturated vertices")]
    Unsaturated,
    #[error("resource cap exceeded: {0}")]
    CapExceeded(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("certificate rejected: {0}")]
    BadCertificate(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
