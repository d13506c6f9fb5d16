use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid ledger: {0}")]
    InvalidLedger(String),

    #[error("arithmetic overflow: {0}")]
    Overflow(String),

    #[error("debt values sum to {0}, expected 0")]
    NonZeroSum(i128),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid transfer: {0}")]
    InvalidTransfer(String),

    #[error("instance too large for the exact oracle: {nonzero} nonzero entries (limit {limit})")]
    InstanceTooLarge { nonzero: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("generation failed: {0}")]
    GenerationFailed(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{}: {source}", path.display())]
    File { path: std::path::PathBuf, source: std::io::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse { line, message: message.into() }
    }
}
