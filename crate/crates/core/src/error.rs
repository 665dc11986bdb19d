use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: NodeId, n: usize },

    #[error("cut side must be non-empty")]
    EmptySide,

    #[error("cut side must not contain every node")]
    FullSide,

    #[error("source and sink must differ (both {0})")]
    SameEndpoints(NodeId),

    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),

    #[error("edge ({u}, {v}) has zero weight")]
    ZeroWeight { u: NodeId, v: NodeId },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what}: n = {n} exceeds the limit of {limit}")]
    GuardExceeded {
        what: &'static str,
        n: usize,
        limit: usize,
    },

    #[error("input must be a simple graph (unit weights, no self-loop mass)")]
    NotSimple,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("at least two terminals are required, got {0}")]
    TooFewTerminals(usize),

    #[error("node sets overlap at node {0}")]
    Overlap(NodeId),

    #[error("max edge weight {max} exceeds the polynomial bound {bound}")]
    WeightsNotPolynomial { max: u64, bound: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("artifact does not match graph: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
