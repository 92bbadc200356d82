//! Verification reports, invariant classification and the model-family table
//! behind the `kmuforge` binary.

pub mod classify;
pub mod json;
pub mod models;
pub mod report;

use kmuforge_core::GeometryError;
use serde::Serialize;

pub use classify::{cmd_classify, Classification, ClassifyInput};
pub use models::{cmd_models, ModelTable};
pub use report::{cmd_report, RunConfig, StructureReport};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("sasakian input; every Sasakian structure has k = 1")]
    SasakianInput,
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Geometry(_) => "numerical",
            CliError::SasakianInput => "sasakian_input",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Json(_) => "serialization",
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ErrorRecord {
    pub schema_version: u32,
    pub error: ErrorBody,
}

#[derive(Debug, Serialize)]
pub struct ErrorBody {
    pub kind: &'static str,
    pub message: String,
}

impl From<&CliError> for ErrorRecord {
    fn from(e: &CliError) -> Self {
        ErrorRecord {
            schema_version: SCHEMA_VERSION,
            error: ErrorBody {
                kind: e.kind(),
                message: e.to_string(),
            },
        }
    }
}
