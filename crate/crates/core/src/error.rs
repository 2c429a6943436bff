use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("user id must be non-empty")]
    EmptyUserId,
    #[error("self-loop on `{0}`")]
    SelfLoop(String),
    #[error("duplicate edge `{src}` -> `{dst}`")]
    DuplicateEdge { src: String, dst: String },
    #[error("edge weight {weight} outside [0, 1] on `{src}` -> `{dst}`")]
    WeightOutOfRange {
        src: String,
        dst: String,
        weight: f64,
    },
    #[error("value {0} is not a finite number")]
    NonFinite(f64),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("unknown user `{0}`")]
    UnknownUser(String),
    #[error("node index {0} is out of range")]
    NodeOutOfRange(usize),
    #[error("a multiplex network needs at least one layer")]
    NoLayers,
    #[error("layer {found} supplied at position {expected}")]
    LayerIndexMismatch { expected: usize, found: usize },
    #[error("network is incomplete: {0}")]
    Incomplete(String),
    #[error("node {0} is not a user node of the coupled network")]
    NotAUserNode(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("coverage denominator is zero")]
    ZeroDenominator,
    #[error("target fraction {beta} cannot be reached (best coverage {reached} of {total})")]
    Unreachable { beta: f64, reached: f64, total: f64 },
    #[error("brute force is capped at {cap} users, network has {users}")]
    TooManyUsers { users: usize, cap: usize },
    #[error("infeasible overlap: {0}")]
    InfeasibleOverlap(String),
    #[error("write failed")]
    Write,
}

impl From<core::fmt::Error> for Error {
    fn from(_: core::fmt::Error) -> Self {
        Error::Write
    }
}
