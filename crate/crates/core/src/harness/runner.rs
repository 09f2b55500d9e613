//! Sweep execution: run enumeration, seeded parallel solving, persistence.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::table::{ResultRow, ResultsTable};
use super::{ExperimentSpec, HarnessError, InstanceSource, RunMode, SolverKind};
use crate::baselines::walksat_solve;
use crate::instance::{generate_planted, parse_dimacs, Cnf3Instance};
use crate::integrate::solve;
use crate::seeding::{split_seed, SEED_SCHEME};

/// Domain tags keeping instance-generation streams disjoint from
/// run-initialization streams.
const DOMAIN_INSTANCE: u64 = 1;
const DOMAIN_RUN: u64 = 2;

pub(crate) fn instance_seed(master: u64, n: u32, instance_id: u32) -> u64 {
    split_seed(master, &[DOMAIN_INSTANCE, u64::from(n), u64::from(instance_id)])
}

pub(crate) fn run_seed(master: u64, n: u32, instance_id: u32, run_id: u32) -> u64 {
    split_seed(
        master,
        &[
            DOMAIN_RUN,
            u64::from(n),
            u64::from(instance_id),
            u64::from(run_id),
        ],
    )
}

/// Everything needed to recompute a sweep from scratch.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub spec: ExperimentSpec,
    pub code_version: String,
    pub rng: String,
    pub seed_scheme: String,
    pub seed_domains: String,
    pub total_runs: usize,
    pub solved_runs: usize,
    pub censored_runs: usize,
    pub diverged_runs: usize,
}

impl Manifest {
    fn new(spec: &ExperimentSpec, table: &ResultsTable) -> Self {
        Self {
            spec: spec.clone(),
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            rng: "chacha8 (rand_chacha 0.9, seed_from_u64)".to_string(),
            seed_scheme: SEED_SCHEME.to_string(),
            seed_domains: format!(
                "instance seed: coords [{DOMAIN_INSTANCE}, n, instance_id]; \
                 run seed: coords [{DOMAIN_RUN}, n, instance_id, run_id]"
            ),
            total_runs: table.rows.len(),
            solved_runs: table.rows.iter().filter(|r| r.solved).count(),
            censored_runs: table.rows.iter().filter(|r| r.censored).count(),
            diverged_runs: table.rows.iter().filter(|r| r.diverged).count(),
        }
    }
}

/// One unit of work: which instance to solve and with which stream.
struct RunDescriptor {
    n: u32,
    instance_id: u32,
    run_id: u32,
    instance: InstanceRef,
}

enum InstanceRef {
    /// Generate on demand inside the worker (fresh-instance mode).
    Seeded { ratio: f64 },
    /// Pre-built shared instance (same-instance mode and DIMACS files).
    Shared(Arc<Cnf3Instance>),
}

fn enumerate_runs(spec: &ExperimentSpec) -> Result<Vec<RunDescriptor>, HarnessError> {
    let mut runs = Vec::new();
    match &spec.instance_source {
        InstanceSource::Generator { ratio, config } => {
            for &n in &spec.n_list {
                match spec.run_mode {
                    RunMode::FreshInstance => {
                        for i in 0..spec.runs_per_n {
                            runs.push(RunDescriptor {
                                n,
                                instance_id: i,
                                run_id: 0,
                                instance: InstanceRef::Seeded { ratio: *ratio },
                            });
                        }
                    }
                    RunMode::SameInstanceRandomInit => {
                        let (inst, _) =
                            generate_planted(n, *ratio, instance_seed(spec.master_seed, n, 0), config)?;
                        let shared = Arc::new(inst);
                        for r in 0..spec.runs_per_n {
                            runs.push(RunDescriptor {
                                n,
                                instance_id: 0,
                                run_id: r,
                                instance: InstanceRef::Shared(Arc::clone(&shared)),
                            });
                        }
                    }
                }
            }
        }
        InstanceSource::DimacsDir { path } => {
            let mut files: Vec<PathBuf> = fs::read_dir(path)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "cnf" || e == "dimacs"))
                .collect();
            files.sort();
            if files.is_empty() {
                return Err(HarnessError::InvalidSpec(format!(
                    "no .cnf or .dimacs files under {}",
                    path.display()
                )));
            }
            let instances: Vec<Arc<Cnf3Instance>> = files
                .iter()
                .map(|f| Ok(Arc::new(parse_dimacs(&fs::read_to_string(f)?)?)))
                .collect::<Result<_, HarnessError>>()?;
            match spec.run_mode {
                RunMode::FreshInstance => {
                    // Cycle through the files until runs_per_n attempts exist.
                    for r in 0..spec.runs_per_n {
                        let idx = (r as usize) % instances.len();
                        let inst = Arc::clone(&instances[idx]);
                        runs.push(RunDescriptor {
                            n: inst.num_vars(),
                            instance_id: idx as u32,
                            run_id: r / instances.len() as u32,
                            instance: InstanceRef::Shared(inst),
                        });
                    }
                }
                RunMode::SameInstanceRandomInit => {
                    if instances.len() != 1 {
                        return Err(HarnessError::InvalidSpec(format!(
                            "same-instance mode needs exactly one DIMACS file, found {}",
                            instances.len()
                        )));
                    }
                    let inst = Arc::clone(&instances[0]);
                    for r in 0..spec.runs_per_n {
                        runs.push(RunDescriptor {
                            n: inst.num_vars(),
                            instance_id: 0,
                            run_id: r,
                            instance: InstanceRef::Shared(Arc::clone(&inst)),
                        });
                    }
                }
            }
        }
    }
    Ok(runs)
}

fn execute_run(spec: &ExperimentSpec, desc: &RunDescriptor) -> ResultRow {
    let started = Instant::now();
    let seed = run_seed(spec.master_seed, desc.n, desc.instance_id, desc.run_id);
    let flagged = |wall: f64| ResultRow {
        n: desc.n,
        instance_id: desc.instance_id,
        run_id: desc.run_id,
        seed,
        solved: false,
        tts: 0,
        censored: true,
        diverged: true,
        wall_seconds: wall,
    };

    let owned;
    let inst: &Cnf3Instance = match &desc.instance {
        InstanceRef::Shared(inst) => inst,
        InstanceRef::Seeded { ratio } => {
            let gen_seed = instance_seed(spec.master_seed, desc.n, desc.instance_id);
            let config = match &spec.instance_source {
                InstanceSource::Generator { config, .. } => config.clone(),
                InstanceSource::DimacsDir { .. } => unreachable!("seeded runs come from the generator"),
            };
            match generate_planted(desc.n, *ratio, gen_seed, &config) {
                Ok((inst, _)) => {
                    owned = inst;
                    &owned
                }
                Err(_) => return flagged(started.elapsed().as_secs_f64()),
            }
        }
    };

    let outcome = match spec.solver {
        SolverKind::Dmm => {
            let mut cfg = spec.integrator.clone();
            cfg.trajectory = None;
            match solve(inst, &spec.dmm_params, &cfg, seed) {
                Ok((outcome, _)) => outcome,
                Err(_) => return flagged(started.elapsed().as_secs_f64()),
            }
        }
        SolverKind::Walksat => {
            let mut cfg = spec.walksat.clone();
            cfg.seed = seed;
            walksat_solve(inst, &cfg)
        }
        SolverKind::External => unreachable!("rejected by spec validation"),
    };

    ResultRow {
        n: desc.n,
        instance_id: desc.instance_id,
        run_id: desc.run_id,
        seed,
        solved: outcome.solved,
        tts: outcome.tts_steps,
        censored: outcome.censored,
        diverged: outcome.diverged,
        wall_seconds: started.elapsed().as_secs_f64(),
    }
}

/// Executes every run of the sweep (in parallel) and returns the sorted
/// results table. Per-run failures become flagged rows; the sweep itself
/// only fails on invalid specs or unreadable inputs.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultsTable, HarnessError> {
    spec.validate()?;
    let runs = enumerate_runs(spec)?;
    let rows: Vec<ResultRow> = runs.par_iter().map(|desc| execute_run(spec, desc)).collect();
    Ok(ResultsTable::new(rows))
}

/// Runs the sweep and persists `results.csv`, `timings.csv`, and
/// `manifest.json` under `out_dir` (falling back to the spec's
/// output_dir, then to `./<spec name>`).
pub fn run_and_persist(
    spec: &ExperimentSpec,
    out_dir: Option<&Path>,
) -> Result<(ResultsTable, Manifest, PathBuf), HarnessError> {
    let table = run_experiment(spec)?;
    let manifest = Manifest::new(spec, &table);
    let dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => spec
            .output_dir
            .clone()
            .unwrap_or_else(|| PathBuf::from(&spec.name)),
    };
    fs::create_dir_all(&dir)?;
    fs::write(dir.join("results.csv"), table.to_csv())?;
    fs::write(dir.join("timings.csv"), table.timings_csv())?;
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok((table, manifest, dir))
}
