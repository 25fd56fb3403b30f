use std::io;
use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),

    #[error(transparent)]
    Numerical(dephasing_core::Error),

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error("selfcheck failed")]
    SelfcheckFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::SelfcheckFailed => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Io { .. } | CliError::Csv { .. } => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<dephasing_core::Error> for CliError {
    fn from(e: dephasing_core::Error) -> Self {
        use dephasing_core::Error as E;
        match e {
            E::InvalidParams(_) | E::InvalidFamily(_) | E::InvalidTime(_) | E::InvalidConfig(_) => {
                CliError::Validation(e.to_string())
            }
            other => CliError::Numerical(other),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
