use std::fmt;

use girthlab_core::glue::{ErrorClass, GlueError};
use girthlab_core::graph::GraphError;
use girthlab_core::io::FormatError;
use girthlab_core::localize::LocalizeError;
use girthlab_core::spectral::SpectralError;
use girthlab_core::tree::TreeError;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Class {
    Validation,
    Budget,
    Internal,
}

impl Class {
    pub fn exit_code(self) -> i32 {
        match self {
            Class::Validation => 2,
            Class::Budget => 3,
            Class::Internal => 4,
        }
    }
}

/// A failure as reported to the user: which module raised it, at which
/// stage, and how it maps to an exit code.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CliError {
    pub module: &'static str,
    pub stage: String,
    pub class: Class,
    pub message: String,
}

impl CliError {
    pub fn new(module: &'static str, stage: impl Into<String>, class: Class, message: impl Into<String>) -> Self {
        Self {
            module,
            stage: stage.into(),
            class,
            message: message.into(),
        }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new("harness-cli", "config", Class::Validation, message)
    }

    pub fn io(path: &std::path::Path, err: std::io::Error) -> Self {
        Self::new("harness-cli", "io", Class::Validation, format!("{}: {err}", path.display()))
    }

    /// Replaces the stage unless the source already named one.
    pub fn at(mut self, stage: &str) -> Self {
        if self.stage.is_empty() {
            self.stage = stage.to_string();
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({ "error": self }).to_string()
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.module, self.stage, self.message)
    }
}

impl std::error::Error for CliError {}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let class = match e {
            GraphError::CycleBudget { .. } => Class::Budget,
            GraphError::ContractionLoop(..) | GraphError::ContractionParallel(..) => Class::Internal,
            _ => Class::Validation,
        };
        Self::new("graph-core", "", class, e.to_string())
    }
}

impl From<FormatError> for CliError {
    fn from(e: FormatError) -> Self {
        Self::new("graph-core", "parse", Class::Validation, e.to_string())
    }
}

impl From<SpectralError> for CliError {
    fn from(e: SpectralError) -> Self {
        let class = match e {
            SpectralError::CapExceeded { .. } | SpectralError::Overflow(_) => Class::Budget,
            _ => Class::Validation,
        };
        Self::new("spectral-ops", "", class, e.to_string())
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        let class = match e {
            TreeError::TooLarge { .. } => Class::Budget,
            _ => Class::Validation,
        };
        Self::new("tree-spectra", "", class, e.to_string())
    }
}

impl From<GlueError> for CliError {
    fn from(e: GlueError) -> Self {
        let class = match e.class() {
            ErrorClass::Validation => Class::Validation,
            ErrorClass::Budget => Class::Budget,
            ErrorClass::Internal => Class::Internal,
        };
        Self::new("glue-construct", e.stage().unwrap_or(""), class, e.to_string())
    }
}

impl From<LocalizeError> for CliError {
    fn from(e: LocalizeError) -> Self {
        let class = match e {
            LocalizeError::Invariant(_) => Class::Internal,
            LocalizeError::Spectral(SpectralError::CapExceeded { .. }) => Class::Budget,
            _ => Class::Validation,
        };
        Self::new("localization-analysis", "", class, e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
