use crate::data::Finding;
use solarsite_core::CoreError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {msg}")]
    Parse { path: PathBuf, msg: String },
    #[error("{} data finding(s); first: {}", .0.len(), .0.first().map(|f| f.to_string()).unwrap_or_default())]
    Validation(Vec<Finding>),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("scenario {scenario} is infeasible: {detail}")]
    Infeasible { scenario: String, detail: String },
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Lp(#[from] solarsite_lp::LpError),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code: 1 for bad data or configuration, 2 for an infeasible model.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
