//! The results table and its CSV persistence.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// One solve attempt. `tts` is in integration steps for the DMM and in
/// flips for WalkSAT; for unsolved runs it records the steps executed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub n: u32,
    pub instance_id: u32,
    pub run_id: u32,
    pub seed: u64,
    pub solved: bool,
    pub tts: u64,
    pub censored: bool,
    pub diverged: bool,
    /// Measured wall time; diagnostic only, persisted to the sidecar file.
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ResultsTable {
    pub rows: Vec<ResultRow>,
}

pub(crate) const RESULTS_HEADER: &str = "n,instance_id,run_id,seed,solved,tts,censored,diverged";

impl ResultsTable {
    pub fn new(mut rows: Vec<ResultRow>) -> Self {
        rows.sort_by_key(|r| (r.n, r.instance_id, r.run_id));
        Self { rows }
    }

    /// Deterministic CSV of the run outcomes (no wall-clock column).
    pub fn to_csv(&self) -> String {
        let mut out = String::from(RESULTS_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.n, r.instance_id, r.run_id, r.seed, r.solved, r.tts, r.censored, r.diverged
            );
        }
        out
    }

    /// Wall-clock sidecar CSV; inherently non-reproducible, kept apart so
    /// `results.csv` stays byte-identical across executions.
    pub fn timings_csv(&self) -> String {
        let mut out = String::from("n,instance_id,run_id,wall_seconds\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6}",
                r.n, r.instance_id, r.run_id, r.wall_seconds
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, HarnessError> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, header)) if header.trim() == RESULTS_HEADER => {}
            other => {
                return Err(HarnessError::Csv {
                    line: 1,
                    msg: format!(
                        "expected header {RESULTS_HEADER:?}, got {:?}",
                        other.map(|(_, h)| h).unwrap_or("")
                    ),
                })
            }
        }
        let mut rows = Vec::new();
        for (idx, line) in lines {
            let lineno = idx + 1;
            if line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 8 {
                return Err(HarnessError::Csv {
                    line: lineno,
                    msg: format!("expected 8 fields, got {}", fields.len()),
                });
            }
            let parse_err = |msg: String| HarnessError::Csv { line: lineno, msg };
            rows.push(ResultRow {
                n: fields[0].parse().map_err(|_| parse_err(format!("bad n {:?}", fields[0])))?,
                instance_id: fields[1]
                    .parse()
                    .map_err(|_| parse_err(format!("bad instance_id {:?}", fields[1])))?,
                run_id: fields[2]
                    .parse()
                    .map_err(|_| parse_err(format!("bad run_id {:?}", fields[2])))?,
                seed: fields[3]
                    .parse()
                    .map_err(|_| parse_err(format!("bad seed {:?}", fields[3])))?,
                solved: fields[4]
                    .parse()
                    .map_err(|_| parse_err(format!("bad solved {:?}", fields[4])))?,
                tts: fields[5]
                    .parse()
                    .map_err(|_| parse_err(format!("bad tts {:?}", fields[5])))?,
                censored: fields[6]
                    .parse()
                    .map_err(|_| parse_err(format!("bad censored {:?}", fields[6])))?,
                diverged: fields[7]
                    .parse()
                    .map_err(|_| parse_err(format!("bad diverged {:?}", fields[7])))?,
                wall_seconds: 0.0,
            });
        }
        Ok(Self { rows })
    }

    pub fn read_csv_file(path: &Path) -> Result<Self, HarnessError> {
        Self::from_csv(&fs::read_to_string(path)?)
    }

    /// Distinct problem sizes, ascending.
    pub fn sizes(&self) -> Vec<u32> {
        let mut sizes: Vec<u32> = self.rows.iter().map(|r| r.n).collect();
        sizes.sort_unstable();
        sizes.dedup();
        sizes
    }
}
