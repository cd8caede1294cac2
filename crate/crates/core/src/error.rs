use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid rank N = {0}: need N >= 2")]
    InvalidRank(usize),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("wrong boson kind: {0}")]
    WrongKind(String),
    #[error("contraction of fields at the same spectral variable is not supported")]
    SameVariable,
    #[error("non-integral exchange exponent {exponent} on factor {factor}")]
    NonIntegralExponent { factor: String, exponent: String },
    #[error("truncation exceeded: {0}")]
    TruncationExceeded(String),
    #[error("critical level k = -g: 1/(k+g) is undefined")]
    CriticalLevel,
    #[error("invalid oracle configuration: {0}")]
    Config(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
