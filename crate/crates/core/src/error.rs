use thiserror::Error;

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed graph6 input; `offset` is the byte position in the token.
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },

    /// The one-byte graph6 form only covers graphs on at most 62 vertices.
    #[error("graph on {n} vertices exceeds the graph6 limit of {limit}")]
    Graph6Size { n: usize, limit: usize },

    /// Malformed edge-list text; `line` is 1-based.
    #[error("edge list parse error on line {line}: {reason}")]
    EdgeList { line: usize, reason: String },

    /// An argument fell outside an operation's domain.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The operation is only defined for connected graphs.
    #[error("{0} requires a connected graph")]
    Disconnected(&'static str),

    /// Matrix and graph sizes (or two matrix sizes) disagree.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix contained NaN or infinite entries.
    #[error("matrix entries must be finite")]
    NonFinite,

    /// The eigensolver did not reach its off-diagonal threshold.
    #[error("eigensolver failed to converge within {sweeps} sweeps")]
    SolverFailure { sweeps: usize },

    /// A closed-form construction could not be completed.
    #[error("construction failed: {0}")]
    Construction(String),

    /// A certificate file could not be read or decoded.
    #[error("certificate file error: {0}")]
    CertificateFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;
