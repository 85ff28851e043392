use nilmoduli_algebra::{AlgebraError, ParseError};
use nilmoduli_hermitian::HermitianError;
use nilmoduli_moduli::ModuliError;
use thiserror::Error;

/// Failures that stop a command before a report exists.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("metric is not positive definite")]
    NotSpd,
    #[error("solver failure: {0}")]
    Solver(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::NotSpd => 3,
            CliError::Solver(_) => 4,
        }
    }
}

impl From<ModuliError> for CliError {
    fn from(e: ModuliError) -> Self {
        match e {
            ModuliError::NotSpd => CliError::NotSpd,
            ModuliError::CanonicalizationFailed { residual } => {
                CliError::Solver(format!("canonicalization failed, best residual {residual:e}"))
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<HermitianError> for CliError {
    fn from(e: HermitianError) -> Self {
        match e {
            HermitianError::Moduli(m) => m.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<AlgebraError> for CliError {
    fn from(e: AlgebraError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
