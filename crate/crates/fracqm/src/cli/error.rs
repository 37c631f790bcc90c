use std::path::Path;

use serde::Serialize;

/// Everything that stops a run, serialized to stderr as one JSON object.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CliError {
    /// Malformed config: bad TOML, wrong type, unknown or missing field.
    Schema { path: String, message: String },
    /// Well-formed config with values outside the physical domain.
    Domain { path: String, message: String },
    Io { path: String, message: String },
    /// A job failed while computing.
    Compute { job: String, message: String },
    /// The validation suite ran and some criteria failed.
    ValidationFailed { failed: Vec<u32> },
}

impl CliError {
    pub fn domain(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Domain { path: path.into(), message: message.into() }
    }

    pub fn missing(section: &str) -> Self {
        CliError::Schema { path: section.into(), message: format!("missing section [{section}]") }
    }

    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ValidationFailed { .. } => 1,
            CliError::Schema { .. } => 3,
            CliError::Domain { .. } => 4,
            CliError::Io { .. } => 5,
            CliError::Compute { .. } => 6,
        }
    }

    pub fn report(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}
