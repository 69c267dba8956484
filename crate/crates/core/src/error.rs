use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at position {pos} near `{token}`: {msg}")]
    Parse {
        pos: usize,
        token: String,
        msg: String,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(pos: usize, token: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Parse {
            pos,
            token: token.into(),
            msg: msg.into(),
        }
    }
}
