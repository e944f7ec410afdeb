use std::process::ExitCode;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Config(_) => 2,
            CliError::NonConvergence(_) => 3,
            CliError::DegenerateFit(_) => 4,
            CliError::Io(_) => 1,
        })
    }
}

impl From<mattersim::Error> for CliError {
    fn from(e: mattersim::Error) -> Self {
        match e {
            mattersim::Error::InvalidInput(m) => CliError::Config(m),
            mattersim::Error::NonConvergence(m) => CliError::NonConvergence(m),
            mattersim::Error::DegenerateFit(m) => CliError::DegenerateFit(m),
        }
    }
}
