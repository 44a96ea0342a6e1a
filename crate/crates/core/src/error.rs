use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("construction error: {0}")]
    Construction(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("integrity error: {0}")]
    Integrity(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("no effective threshold: {0}")]
    NoThreshold(String),
    #[error("dead end: {0}")]
    DeadEnd(String),
}
