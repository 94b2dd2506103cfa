use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Param(String),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("divergent quantity: {0}")]
    Divergent(String),

    /// The distribution is already below the outbreak threshold; no
    /// quarantine is required to reach herd immunity.
    #[error("no quarantine threshold needed: distribution is already subcritical")]
    NoThresholdNeeded,

    /// The herd condition is positive on all of (0, 1): no single quarantine
    /// immunizes the graph.
    #[error("no quarantine threshold exists: herd condition is positive on (0, 1)")]
    NoThresholdExists,

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }
}
