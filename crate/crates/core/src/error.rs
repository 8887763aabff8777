use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid graph family parameters: {0}")]
    InvalidFamily(String),

    #[error("graph is not simple: {0}")]
    NotSimple(String),

    #[error("graph is not connected")]
    Disconnected,

    #[error("vertex {vertex} out of range for graph on {vertex_count} vertices")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },

    #[error("edge {0}-{1} is not present")]
    MissingEdge(VertexId, VertexId),

    #[error("graph carries no row/column coordinates")]
    NoCoordinates,

    #[error("bramble family {family} needs {requirement}")]
    WrongRegime {
        family: &'static str,
        requirement: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("not a bramble: {0}")]
    NotBramble(String),

    #[error("order exceeds budget {budget}; best known bounds [{lower}, {upper}]")]
    OrderAboveBudget {
        budget: usize,
        lower: usize,
        upper: usize,
    },

    #[error("bramble has {count} elements, materialization cap is {cap}")]
    TooManyElements { count: usize, cap: usize },

    #[error("solver supports at most {limit} vertices, graph has {vertex_count}")]
    TooLarge { vertex_count: usize, limit: usize },

    #[error("tree decomposition is not a tree: {0}")]
    NotATree(String),

    #[error("not a permutation of the vertex set: {0}")]
    NotAPermutation(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("graph was simplified by contraction; chip-firing needs the original multiplicities")]
    SimplifiedGraph,

    #[error("divisor is not effective")]
    NotEffective,

    #[error("enumeration of {count} candidates exceeds cap {cap}")]
    BudgetExceeded { count: u128, cap: u128 },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("contradiction with predicted value: {0}")]
    Contradiction(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
