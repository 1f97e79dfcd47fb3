use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fell outside its documented domain.
    #[error("domain: {0}")]
    Domain(String),

    /// A scenario or component configuration violates an invariant.
    #[error("configuration: {0}")]
    Config(String),

    /// No window placement satisfies the duration constraint.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// Every grid node assigns zero likelihood to the observed batch.
    #[error("degenerate evidence: batch contradicts the entire belief grid")]
    DegenerateEvidence,

    /// A config, trace, checkpoint, or log file failed to parse.
    #[error("parse: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
