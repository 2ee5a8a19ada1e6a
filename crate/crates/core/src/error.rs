use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied value is outside the operation's domain.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// The instance is well-formed but larger than the exhaustive caps allow.
    #[error("infeasible instance: {0}")]
    Infeasible(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// A certificate or witness did not survive independent re-checking.
    #[error("verification failed: {0}")]
    Verification(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
