use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input contains no edges")]
    EmptyInput,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("node {node} is out of range for a graph with {node_count} nodes")]
    NodeOutOfRange { node: usize, node_count: usize },
    #[error("isolated start: node {0} has no neighbors")]
    IsolatedStart(usize),
    #[error("graph has no edges")]
    NoEdges,
    #[error("every node of the graph is isolated")]
    AllIsolated,
    #[error("empty node set")]
    EmptySet,
    #[error("regular graph generation did not converge after {0} restarts")]
    NoConvergence(usize),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}
