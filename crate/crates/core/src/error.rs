use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no convergence in {context}: last estimates {previous:e} and {current:e} after {points} points")]
    NonConvergence {
        context: String,
        previous: f64,
        current: f64,
        points: usize,
    },
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("non-finite state at t = {time}")]
    Unstable { time: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
