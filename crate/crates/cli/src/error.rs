//! Error type of the command-line front end and its exit codes.

use std::path::PathBuf;

use kmq::affine::AffineError;
use kmq::quantum::QuantumError;
use kmq::DatumError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("{0}")]
    NotSupported(String),
    #[error(transparent)]
    Affine(AffineError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{failed} of {total} checks failed")]
    VerifyFailed { failed: usize, total: usize },
}

impl CliError {
    /// 1 for invalid input and failed checks, 2 for an exhausted budget,
    /// 3 for unsupported co-cover queries.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Budget(_) => 2,
            CliError::NotSupported(_) => 3,
            _ => 1,
        }
    }
}

impl From<AffineError> for CliError {
    fn from(e: AffineError) -> Self {
        match e {
            AffineError::BudgetExceeded { .. } | AffineError::Datum(DatumError::BudgetExceeded { .. }) => {
                CliError::Budget(e.to_string())
            }
            AffineError::NotSupported(_) => CliError::NotSupported(e.to_string()),
            AffineError::NotInTitsCone(_) | AffineError::Datum(_) => CliError::Input(e.to_string()),
            other => CliError::Affine(other),
        }
    }
}

impl From<DatumError> for CliError {
    fn from(e: DatumError) -> Self {
        match e {
            DatumError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
