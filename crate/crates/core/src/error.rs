use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid instance: {0}")]
    Validation(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("graph is not a forest")]
    NotAForest,

    #[error("edge {0}-{1} lies within one side of the bipartition")]
    NotBipartite(usize, usize),

    #[error("matching is not maximum: an augmenting path exists")]
    MatchingNotMaximum,

    #[error("matching is not a perfect matching of the tree")]
    NotPerfect,

    #[error("expected a {0} instance")]
    WrongProblem(&'static str),

    #[error("instance is not clean: the forest has no perfect matching")]
    NotClean,

    #[error("rule precondition violated: {0}")]
    Precondition(String),

    #[error("oracle refused: {n} vertices exceeds cap {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("solution is infeasible: {0}")]
    Infeasible(String),

    #[error("composition: {0}")]
    Composition(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse { line, msg: msg.into() }
    }
}
