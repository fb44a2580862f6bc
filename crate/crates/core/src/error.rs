use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("{axis} index {value} out of range (limit {limit})")]
    OutOfRange {
        axis: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("expected {expected} coefficients, got {got}")]
    Length { expected: usize, got: usize },
    #[error("states do not share a layout")]
    Mismatch,
    #[error("linear combination needs equal, nonzero numbers of coefficients and states")]
    EmptyCombination,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("parse error{}: {message}", fmt_line(*.line))]
    Parse { message: String, line: Option<usize> },
    #[error("invalid `{field}`{}: {message}", fmt_line(*.line))]
    Invalid {
        field: String,
        message: String,
        line: Option<usize>,
    },
}

fn fmt_line(line: Option<usize>) -> String {
    match line {
        Some(l) => format!(" (line {l})"),
        None => String::new(),
    }
}

impl ConfigError {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Invalid {
            field: field.into(),
            message: message.into(),
            line: None,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StepError {
    #[error("non-finite value in stage {stage}")]
    NonFinite { stage: usize },
    #[error("Newton iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NewtonDiverged { iterations: usize, residual: f64 },
    #[error("GMRES did not converge after {restarts} restarts (residual {residual:e})")]
    GmresDiverged { restarts: usize, residual: f64 },
    #[error("modified Runge-Kutta needs an explicit tableau with at least two stages")]
    UnsupportedTableau,
    #[error("method needs an energy evaluator")]
    MissingEnergy,
}

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: malformed content: {message}")]
    Format { path: PathBuf, message: String },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DiagnosticError {
    #[error("series length mismatch: {records} records vs {reports} reports")]
    LengthMismatch { records: usize, reports: usize },
    #[error("sample {index} breaks the uniform cadence")]
    IrregularCadence { index: usize },
    #[error("empty history")]
    Empty,
}
