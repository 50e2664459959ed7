use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: Vertex, n: usize },

    #[error("edge #{index} ({u},{v}) rejected: {reason}")]
    InvalidEdge {
        index: usize,
        u: Vertex,
        v: Vertex,
        reason: &'static str,
    },

    #[error("vertex {0} listed twice")]
    DuplicateVertex(Vertex),

    #[error("the vertex set must be non-empty")]
    EmptySet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("colouring is partial: vertex {0} has no colour")]
    PartialColouring(Vertex),

    #[error("{0}")]
    Refused(String),

    #[error("vertex {vertex} has a list of size {size}, below the required {required}")]
    ListTooShort {
        vertex: Vertex,
        size: usize,
        required: usize,
    },

    #[error("node {node} failed in round {round}: {message}")]
    Program { node: Vertex, round: u64, message: String },

    #[error("round budget of {max_rounds} exhausted before every node produced output")]
    RoundLimit { max_rounds: u64 },

    #[error("no node is awake or has mail in round {round}, but {waiting} nodes have no output")]
    Deadlock { round: u64, waiting: usize },

    #[error("level {level} removed nothing; {} vertices remain", remaining.len())]
    Stalled { level: usize, remaining: Vec<Vertex> },

    #[error("the level limit of {max_levels} was reached with {} vertices remaining", remaining.len())]
    LevelLimit { max_levels: usize, remaining: Vec<Vertex> },

    #[error("could not extend the colouring into {0:?}")]
    ExtensionFailed(Vec<Vertex>),
}
