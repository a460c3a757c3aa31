use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("cut criterion mismatch: {0}")]
    CutMismatch(String),
    #[error("mixed vector lengths: {0} vs {1}")]
    MixedLengths(usize, usize),
    #[error("vectors do not span: rank {rank} < {expected}")]
    NotFullRank { rank: usize, expected: usize },
    #[error("invalid polytope: {0}")]
    InvalidPolytope(String),
    #[error("invalid coloring: {0}")]
    InvalidColoring(String),
    #[error("unsupported-dimension: {0}")]
    UnsupportedDimension(usize),
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error("rejected defining set: {0}")]
    Rejected(String),
    #[error("adjacency graph is not bipartite")]
    NotBipartite,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
