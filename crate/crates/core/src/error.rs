use thiserror::Error;

/// Errors raised by the algebra routines and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("not a unit of Z[t, t^-1]: {0}")]
    NotAUnit(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("singular form: {0}")]
    SingularForm(String),
    #[error("search exhausted: {0}")]
    SearchExhausted(String),
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("unknown group: {0}")]
    UnknownGroup(String),
    #[error("action leaves the exponent window")]
    WindowOverflow,
    #[error("map is not well defined on the quotient: {0}")]
    NotWellDefined(String),
    #[error("wrong parity: {0}")]
    WrongParity(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
