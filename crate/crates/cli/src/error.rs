use std::path::PathBuf;

use kronred_core::reduction::PlanError;
use kronred_core::sim::{CompareError, PulseError};
use kronred_core::{JsonError, NetworkError, ParseError, ReductionError, SimError};
use thiserror::Error;

pub const EXIT_INPUT: u8 = 2;
pub const EXIT_SINGULAR: u8 = 3;
pub const EXIT_INTEGRATION: u8 = 4;
pub const EXIT_IO: u8 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: JsonError },
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Manifest { path: PathBuf, source: toml::de::Error },
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Compare(#[from] CompareError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl From<PulseError> for CliError {
    fn from(e: PulseError) -> Self {
        match e {
            PulseError::Sim(e) => CliError::Sim(e),
            PulseError::Compare(e) => CliError::Compare(e),
        }
    }
}

fn reduction_code(e: &ReductionError) -> u8 {
    match e {
        ReductionError::SingularL22 { .. } => EXIT_SINGULAR,
        ReductionError::Kinetics(_) => EXIT_INTEGRATION,
        _ => EXIT_INPUT,
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse { .. }
            | CliError::Json { .. }
            | CliError::Network(_)
            | CliError::Input(_)
            | CliError::Manifest { .. }
            | CliError::Compare(_) => EXIT_INPUT,
            CliError::Plan(PlanError::Reduction(e)) | CliError::Reduction(e) => reduction_code(e),
            CliError::Plan(_) => EXIT_INPUT,
            CliError::Sim(e) => match e {
                SimError::InvalidConfig(_) | SimError::Dimension { .. } | SimError::InvalidInitial { .. } => {
                    EXIT_INPUT
                }
                _ => match e.reduction_error() {
                    Some(r) => reduction_code(r),
                    None => EXIT_INTEGRATION,
                },
            },
            CliError::Io { .. } => EXIT_IO,
        }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}
