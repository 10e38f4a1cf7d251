use std::fmt;
use std::path::Path;

use serde::Serialize;

/// Failure of one command. `exit_code` is 2 for bad input (config, files,
/// parameters) and 1 for everything the numerics report.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum ErrorKind {
    InvalidInput,
    NumericalFailure,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::InvalidInput, message: message.into(), field: None, detail: None }
    }

    pub fn invalid_field(field: &str, message: impl Into<String>) -> Self {
        CliError { field: Some(field.into()), ..Self::invalid(message) }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { kind: ErrorKind::NumericalFailure, message: message.into(), field: None, detail: None }
    }

    pub fn with_detail(mut self, detail: serde_json::Value) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn read(path: &Path, e: std::io::Error) -> Self {
        Self::invalid(format!("cannot read {}: {e}", path.display()))
    }

    pub fn write(path: &Path, e: std::io::Error) -> Self {
        Self::numerical(format!("cannot write {}: {e}", path.display()))
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            ErrorKind::InvalidInput => 2,
            ErrorKind::NumericalFailure => 1,
        }
    }

    /// The machine-readable form written to stderr and `error.json`.
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("error serializes");
        v["exitCode"] = self.exit_code().into();
        v
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.field {
            Some(k) => write!(f, "{k}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<gkp_core::Error> for CliError {
    fn from(e: gkp_core::Error) -> Self {
        use gkp_core::Error as E;
        match e {
            E::InvalidParams { field, reason } => CliError::invalid_field(field, reason),
            E::DimensionMismatch { .. } | E::NonZeroXMean { .. } => CliError::invalid(e.to_string()),
            other => CliError::numerical(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
