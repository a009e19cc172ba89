use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("node {node} out of range for a graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("duplicate leader {0}")]
    DuplicateLeader(usize),
    #[error("leader set is empty")]
    EmptyLeaderSet,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no directed path from {from} to {to}")]
    Unreachable { from: usize, to: usize },
    #[error("sequence is not pseudo-monotonically increasing")]
    NotPmi,
    #[error("instance too large: {size} exceeds limit {limit} ({hint})")]
    TooLarge {
        size: usize,
        limit: usize,
        hint: &'static str,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
