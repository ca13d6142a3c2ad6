use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("weight a_{index} = {value} is outside (0, 1]")]
    WeightOutOfRange { index: usize, value: String },

    #[error("input datum violates 2g - 2 + sum(a_i) > 0 (g = {genus}, sum = {total})")]
    DegenerateDatum { genus: u32, total: String },

    #[error("expected {expected} weights, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("unknown edge {0}")]
    UnknownEdge(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not stable of the requested type: {0}")]
    Unstable(String),

    #[error("weights are not dominated: b_{index} > a_{index}")]
    NotDominated { index: usize },

    #[error("weights lie on the wall sum_{{j in S}} a_j = 1 for S = {subset:?}")]
    OnWall { subset: Vec<usize> },

    #[error("infinite edge length in a non-extended complex")]
    InfiniteLength,

    #[error("invalid length: {0}")]
    InvalidLength(String),

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("{path}: {message}")]
    Parse { path: String, message: String },
}

impl Error {
    pub(crate) fn parse(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}
