use thiserror::Error;

use crate::tree::Side;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex index {0} out of range")]
    InvalidVertex(usize),
    #[error("vertex {0} is not a leaf")]
    NotALeaf(usize),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("negative value for {0}")]
    NegativeDatum(String),
    #[error("vertices of a pair must differ (got {0} twice)")]
    DegeneratePair(usize),
    #[error("need at least 2 targets, got {0}")]
    TooFewTargets(usize),
    #[error("vertex set must be nonempty")]
    EmptySet,
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: String, hi: String },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("instance size {size} exceeds limit {limit}")]
    SizeLimitExceeded { size: usize, limit: usize },
    #[error("tree is not a star")]
    NotAStar,
    #[error("infeasible: {} violated gap row(s) at saturation", violations.len())]
    Infeasible { violations: Vec<(usize, Side)> },
    #[error("internal consistency error: {0}")]
    Internal(String),
}

impl Error {
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible { .. })
    }
}
