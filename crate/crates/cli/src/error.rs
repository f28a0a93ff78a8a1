use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("validation failed: {0}")]
    Validation(holder2d::Error),
    #[error("numerical failure: {0}")]
    Numerical(holder2d::Error),
}

impl From<holder2d::Error> for CliError {
    fn from(e: holder2d::Error) -> Self {
        use holder2d::Error as E;
        match e {
            E::EigenIterationDiverged { .. }
            | E::QuadratureBreakdown
            | E::SolverStagnation { .. }
            | E::SingularSystem
            | E::DegenerateWindow(_)
            | E::AngularCenterSingularity => CliError::Numerical(e),
            _ => CliError::Validation(e),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

impl CliError {
    /// 1 for configuration and file problems, 2 for validation, 3 for numerical failures.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) | CliError::Io(_) | CliError::Csv(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) => 3,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
