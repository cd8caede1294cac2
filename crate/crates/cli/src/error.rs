use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] yangian_core::Error),
    #[error("cannot write report {path}: {source}")]
    Report {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input, 3 for failures inside a computation.
    pub fn exit_code(&self) -> u8 {
        use yangian_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::Parse(_) | E::Config(_) | E::InvalidRank(_) | E::IndexOutOfRange(_) | E::CriticalLevel) => 2,
            CliError::Core(_) | CliError::Report { .. } => 3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use yangian_core::Error as E;

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Usage("x".into()).exit_code(), 2);
        assert_eq!(CliError::from(E::CriticalLevel).exit_code(), 2);
        assert_eq!(CliError::from(E::TruncationExceeded("x".into())).exit_code(), 3);
        let non_integral = E::NonIntegralExponent {
            factor: "u-v".into(),
            exponent: "1/2".into(),
        };
        assert_eq!(CliError::from(non_integral).exit_code(), 3);
    }
}
