//! Command-line front end: file formats, the integrated reduction
//! pipeline, and deterministic textual/JSON reporting.

pub mod commands;
pub mod format;
pub mod output;
pub mod pipeline;

use dredge::pid::{Severity, ValidationReport};
use std::fmt;

/// Command failures mapped onto the process exit codes:
/// 1 validation failure, 2 structural/usage error, 3 resource cap.
#[derive(Debug)]
pub enum CliError {
    /// Malformed input file.
    Parse(String),
    /// The diagram failed validation.
    Validation(String),
    /// A check command found a deviation or a broken property.
    Check(String),
    /// Engine error from a reduction or query.
    Engine(dredge::Error),
    /// Bad command-line arguments.
    Usage(String),
    /// File could not be read.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Validation(_) | CliError::Check(_) => 1,
            CliError::Engine(dredge::Error::Resource(_)) => 3,
            CliError::Engine(_) | CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Validation(m) => write!(f, "validation failed:\n{m}"),
            CliError::Check(m) => write!(f, "check failed: {m}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl From<dredge::Error> for CliError {
    fn from(e: dredge::Error) -> Self {
        CliError::Engine(e)
    }
}

/// One line per finding, errors before warnings, in report order.
pub fn render_findings(_pid: &dredge::pid::Pid, report: &ValidationReport) -> String {
    let mut lines = Vec::new();
    for severity in [Severity::Error, Severity::Warning] {
        for finding in report.findings.iter().filter(|f| f.severity == severity) {
            let tag = match severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            lines.push(format!("{tag} {}: {}", finding.subject, finding.message));
        }
    }
    lines.join("\n")
}
