//! Ingestion of externally produced solver timing logs.
//!
//! Two formats are accepted: plain text with one positive duration per
//! line, and CSV with a named column. Values are wall-clock seconds.

use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("non-positive time {value} at line {line}")]
    NonPositiveTime { line: usize, value: f64 },
    #[error("column {0:?} not found in CSV header")]
    MissingColumn(String),
}

/// Input layout descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimingFormat {
    /// One duration per line; blank lines ignored.
    Plain,
    /// Comma-separated values with a header row; durations read from the
    /// named column.
    Csv { column: String },
}

/// Validated timing sample from an external solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExternalTimings {
    pub solver: String,
    pub times: Vec<f64>,
    pub censored_count: usize,
}

impl ExternalTimings {
    pub fn with_solver(mut self, solver: impl Into<String>) -> Self {
        self.solver = solver.into();
        self
    }

    pub fn with_censored_count(mut self, censored_count: usize) -> Self {
        self.censored_count = censored_count;
        self
    }
}

/// Parses and validates timing values from `reader`.
///
/// The returned record carries solver name `"external"`; use
/// [`ExternalTimings::with_solver`] to attach the real name.
pub fn ingest_timings<R: BufRead>(
    reader: R,
    format: &TimingFormat,
) -> Result<ExternalTimings, IngestError> {
    let times = match format {
        TimingFormat::Plain => ingest_plain(reader)?,
        TimingFormat::Csv { column } => ingest_csv(reader, column)?,
    };
    Ok(ExternalTimings {
        solver: "external".into(),
        times,
        censored_count: 0,
    })
}

fn validate_time(value: f64, line: usize) -> Result<f64, IngestError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(IngestError::NonPositiveTime { line, value });
    }
    Ok(value)
}

fn ingest_plain<R: BufRead>(reader: R) -> Result<Vec<f64>, IngestError> {
    let mut times = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let token = line.trim();
        if token.is_empty() {
            continue;
        }
        let value: f64 = token.parse().map_err(|_| IngestError::Parse {
            line: lineno,
            msg: format!("bad number {token:?}"),
        })?;
        times.push(validate_time(value, lineno)?);
    }
    Ok(times)
}

fn ingest_csv<R: BufRead>(reader: R, column: &str) -> Result<Vec<f64>, IngestError> {
    let mut lines = reader.lines();
    let header = lines
        .next()
        .transpose()?
        .ok_or_else(|| IngestError::MissingColumn(column.to_string()))?;
    let col = header
        .split(',')
        .position(|name| name.trim() == column)
        .ok_or_else(|| IngestError::MissingColumn(column.to_string()))?;

    let mut times = Vec::new();
    for (idx, line) in lines.enumerate() {
        let line = line?;
        let lineno = idx + 2;
        if line.trim().is_empty() {
            continue;
        }
        let token = line
            .split(',')
            .nth(col)
            .ok_or_else(|| IngestError::Parse {
                line: lineno,
                msg: format!("row has no column {col}"),
            })?
            .trim();
        let value: f64 = token.parse().map_err(|_| IngestError::Parse {
            line: lineno,
            msg: format!("bad number {token:?}"),
        })?;
        times.push(validate_time(value, lineno)?);
    }
    Ok(times)
}
