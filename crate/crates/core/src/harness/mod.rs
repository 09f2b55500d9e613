//! Experiment orchestration: seeded sweeps over problem sizes, persisted
//! results tables, and distribution/scaling analysis reports.
//!
//! Every run's random stream is derived from the spec's master seed and
//! the run coordinates, so a sweep is reproducible byte for byte no
//! matter how many workers execute it. Raw outcomes are persisted as
//! CSV, reports as JSON; wall-clock timings go to a separate sidecar
//! file so the canonical results table stays deterministic.

mod analyze;
mod presets;
mod runner;
mod table;

pub use analyze::{analyze, write_analysis, AnalysisOptions, AnalysisReport, FitFamily, GroupReport};
pub use presets::{preset, preset_names};
pub use runner::{run_and_persist, run_experiment, Manifest};
pub use table::{ResultRow, ResultsTable};

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::baselines::WalkSatConfig;
use crate::dmm::{DmmError, DmmParams};
use crate::instance::{GeneratorConfig, InstanceError};
use crate::integrate::{IntegrateError, IntegratorConfig};
use crate::stats::StatsError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Integrate(#[from] IntegrateError),
    #[error(transparent)]
    Dmm(#[from] DmmError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("results table parse error at line {line}: {msg}")]
    Csv { line: usize, msg: String },
}

/// Which solver executes the runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    Dmm,
    Walksat,
    /// Placeholder for externally produced timings; such data is ingested
    /// and fitted directly, never executed as a sweep.
    External,
}

/// Where instances come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum InstanceSource {
    /// Planted random instances at a fixed clause-to-variable ratio.
    Generator {
        ratio: f64,
        #[serde(default)]
        config: GeneratorConfig,
    },
    /// DIMACS files from a directory, processed in sorted filename order.
    DimacsDir { path: PathBuf },
}

/// Whether each run solves a fresh instance or the same instance from a
/// fresh random initial condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunMode {
    FreshInstance,
    SameInstanceRandomInit,
}

/// Full description of a sweep; serializable as the JSON spec file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub name: String,
    pub solver: SolverKind,
    pub instance_source: InstanceSource,
    /// Problem sizes (ignored for DIMACS sources, which carry their own N).
    #[serde(default)]
    pub n_list: Vec<u32>,
    pub runs_per_n: u32,
    pub run_mode: RunMode,
    #[serde(default)]
    pub dmm_params: DmmParams,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub walksat: WalkSatConfig,
    pub master_seed: u64,
    /// Default output directory; CLI flags and the environment may override.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    /// Free-form note, e.g. how a preset was scaled down from the full
    /// protocol; recorded in the manifest.
    #[serde(default)]
    pub note: Option<String>,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs_per_n == 0 {
            return Err(HarnessError::InvalidSpec("runs_per_n must be >= 1".into()));
        }
        match &self.instance_source {
            InstanceSource::Generator { ratio, config } => {
                if !(ratio.is_finite() && *ratio > 0.0) {
                    return Err(HarnessError::InvalidSpec(format!(
                        "generator ratio must be > 0, got {ratio}"
                    )));
                }
                if config.type_weights.iter().any(|w| !w.is_finite() || *w < 0.0)
                    || config.type_weights.iter().sum::<f64>() <= 0.0
                {
                    return Err(HarnessError::InvalidSpec(
                        "generator type_weights must contain a positive entry".into(),
                    ));
                }
                if self.n_list.is_empty() {
                    return Err(HarnessError::InvalidSpec(
                        "n_list must not be empty for generated instances".into(),
                    ));
                }
            }
            InstanceSource::DimacsDir { .. } => {}
        }
        match self.solver {
            SolverKind::Dmm => self.integrator.validate()?,
            SolverKind::Walksat => self
                .walksat
                .validate()
                .map_err(HarnessError::InvalidSpec)?,
            SolverKind::External => {
                return Err(HarnessError::InvalidSpec(
                    "external solvers cannot be executed; ingest their timing logs instead".into(),
                ))
            }
        }
        self.dmm_params.validate()?;
        Ok(())
    }
}
