use thiserror::Error;

/// Errors shared by the whole crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    InvalidVertex(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("vertices {0} and {1} are not adjacent")]
    NoSuchEdge(usize, usize),
    #[error("expected two distinct vertices, got {0} twice")]
    SameVertex(usize),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("vertex {0} is neither a source nor a sink")]
    NotSourceOrSink(usize),
    #[error("orientations are not equivalent")]
    NotEquivalent,
    #[error("orientation induced on the contraction is not acyclic")]
    ContractionNotAcyclic,
    #[error("edge ({0},{1}) is a bridge")]
    BridgeEdge(usize, usize),
    #[error("the sequence requires a graph on at least three vertices")]
    TooFewVertices,
    #[error("sink must be an endpoint of the chosen edge")]
    SinkMismatch,
    #[error("hilbert coefficients have not stabilized by the truncation degree")]
    NotStabilized,
    #[error("orientation does not match the expected graph: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
