//! `dmmlab` — generate planted 3-SAT instances, solve them with the DMM
//! dynamics or WalkSAT, sweep experiments, and fit TTS distributions.
//!
//! Environment overrides: `DMMLAB_OUT_DIR` (output directory) and
//! `DMMLAB_WORKERS` (worker thread count).

use std::fs;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use dmmlab_core::baselines::{
    ingest_timings, walksat_solve_with_assignment, TimingFormat, WalkSatConfig,
};
use dmmlab_core::dmm::DmmParams;
use dmmlab_core::harness::{
    analyze, preset, preset_names, run_and_persist, write_analysis, AnalysisOptions,
    ExperimentSpec, FitFamily, ResultsTable,
};
use dmmlab_core::instance::{
    check_assignment, generate_planted, parse_dimacs, write_dimacs, Cnf3Instance, GeneratorConfig,
};
use dmmlab_core::integrate::{solve, IntegratorConfig, Method, TrajectoryConfig};
use dmmlab_core::stats::{
    fit_exponential, fit_invgauss, fit_weibull, BootstrapConfig, Sample,
};

#[derive(Parser)]
#[command(name = "dmmlab", version, about, long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a planted random 3-SAT instance as DIMACS CNF.
    Generate(GenerateArgs),
    /// Solve a DIMACS instance with the DMM dynamics.
    Solve(SolveArgs),
    /// Solve a DIMACS instance with WalkSAT.
    Walksat(WalksatArgs),
    /// Run and analyze experiment sweeps.
    Experiment(ExperimentArgs),
    /// Group a results table by size, fit TTS distributions, and fit the
    /// self-averaging exponent.
    Analyze(AnalyzeArgs),
    /// Fit a distribution to a timing file.
    Fit(FitArgs),
    /// Validate and normalize an external timing file.
    IngestTimings(IngestArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Number of variables.
    #[arg(short, long)]
    n: u32,
    /// Clause-to-variable ratio.
    #[arg(short, long, default_value_t = 7.0)]
    ratio: f64,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Relative weights for clauses with 1, 2, or 3 literals satisfied by
    /// the plant, e.g. `0.5,0.5,0`.
    #[arg(long, value_parser = parse_weights)]
    type_weights: Option<[f64; 3]>,
    /// Output file (stdout when omitted).
    #[arg(short, long)]
    output: Option<PathBuf>,
    /// Also write the planted assignment (one 0/1 line) here.
    #[arg(long)]
    plant_out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// DIMACS CNF file (`-` for stdin).
    #[arg(long)]
    cnf: PathBuf,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.2)]
    dt: f64,
    /// Additive noise strength Gamma on the memory variables.
    #[arg(long, default_value_t = 0.12)]
    noise: f64,
    #[arg(long, default_value_t = 100_000)]
    max_steps: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Euler)]
    method: MethodArg,
    #[arg(long, default_value_t = 0.5)]
    init_x_s: f64,
    #[arg(long, default_value_t = 1.0)]
    init_x_l: f64,
    /// Write a voltage trajectory CSV here.
    #[arg(long)]
    trajectory: Option<PathBuf>,
    /// Record every k-th step of the trajectory.
    #[arg(long, default_value_t = 1)]
    stride: u64,
    /// 1-based variable indices to record (default: all).
    #[arg(long, value_delimiter = ',')]
    vars: Vec<u32>,
}

#[derive(Copy, Clone, ValueEnum)]
enum MethodArg {
    Euler,
    Rk4,
}

#[derive(Args)]
struct WalksatArgs {
    /// DIMACS CNF file (`-` for stdin).
    #[arg(long)]
    cnf: PathBuf,
    #[arg(short, long, default_value_t = 0)]
    seed: u64,
    /// Random-walk move probability.
    #[arg(short = 'p', long, default_value_t = 0.5)]
    noise_prob: f64,
    #[arg(long, default_value_t = 10_000_000)]
    max_flips: u64,
    /// Print the satisfying assignment as a 0/1 string.
    #[arg(long)]
    model: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(subcommand)]
    command: ExperimentCommand,
}

#[derive(Subcommand)]
enum ExperimentCommand {
    /// Execute a sweep from a JSON spec file or a named preset.
    Run(ExperimentRunArgs),
    /// List the available presets.
    Presets,
}

#[derive(Args)]
struct ExperimentRunArgs {
    /// JSON experiment spec file.
    spec: Option<PathBuf>,
    /// Named preset instead of a spec file.
    #[arg(long, conflicts_with = "spec")]
    preset: Option<String>,
    /// Output directory (overrides the spec; `DMMLAB_OUT_DIR` overrides both).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also run the analysis and write fits/plots next to the results.
    #[arg(long)]
    analyze: bool,
    /// Fit family used with --analyze.
    #[arg(long, value_enum, default_value_t = FamilyArg::Invgauss)]
    family: FamilyArg,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// `results.csv` file or a directory containing one.
    #[arg(long)]
    results: PathBuf,
    #[arg(long, value_enum, default_value_t = FamilyArg::Invgauss)]
    family: FamilyArg,
    /// Output directory (default: alongside the results).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Bootstrap resamples for relative-variance errors.
    #[arg(long, default_value_t = 2000)]
    bootstrap_resamples: usize,
    #[arg(long, default_value_t = 0)]
    bootstrap_seed: u64,
}

#[derive(Copy, Clone, ValueEnum)]
enum FamilyArg {
    Invgauss,
    Exponential,
    Weibull,
}

impl From<FamilyArg> for FitFamily {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Invgauss => FitFamily::InverseGaussian,
            FamilyArg::Exponential => FitFamily::Exponential,
            FamilyArg::Weibull => FitFamily::Weibull,
        }
    }
}

#[derive(Args)]
struct FitArgs {
    /// Timing file (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    /// Column name for CSV input.
    #[arg(long)]
    column: Option<String>,
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Solver name recorded in the report.
    #[arg(long, default_value = "external")]
    solver: String,
    /// Number of censored (unreported) runs to record.
    #[arg(long, default_value_t = 0)]
    censored: usize,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Plain,
    Csv,
}

#[derive(Args)]
struct IngestArgs {
    /// Timing file (`-` for stdin).
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = FormatArg::Plain)]
    format: FormatArg,
    #[arg(long)]
    column: Option<String>,
    #[arg(long, default_value = "external")]
    solver: String,
    #[arg(long, default_value_t = 0)]
    censored: usize,
}

fn parse_weights(text: &str) -> Result<[f64; 3], String> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if parts.len() != 3 {
        return Err(format!("expected 3 comma-separated weights, got {}", parts.len()));
    }
    Ok([parts[0], parts[1], parts[2]])
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load_instance(path: &Path) -> Result<Cnf3Instance> {
    let text = read_input(path)?;
    Ok(parse_dimacs(&text)?)
}

fn timing_format(format: FormatArg, column: Option<String>) -> Result<TimingFormat> {
    Ok(match format {
        FormatArg::Plain => TimingFormat::Plain,
        FormatArg::Csv => TimingFormat::Csv {
            column: column.context("--column is required with --format csv")?,
        },
    })
}

fn reader_for(path: &Path) -> Result<Box<dyn BufRead>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(BufReader::new(std::io::stdin())))
    } else {
        let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(Box::new(BufReader::new(file)))
    }
}

fn out_dir_override(cli_out: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os("DMMLAB_OUT_DIR")
        .map(PathBuf::from)
        .or(cli_out)
}

fn main() -> Result<()> {
    if let Some(workers) = std::env::var_os("DMMLAB_WORKERS") {
        let workers: usize = workers
            .to_string_lossy()
            .parse()
            .context("DMMLAB_WORKERS must be an integer")?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("initializing worker pool")?;
    }
    match Cli::parse().command {
        Command::Generate(args) => generate(args),
        Command::Solve(args) => solve_cmd(args),
        Command::Walksat(args) => walksat_cmd(args),
        Command::Experiment(args) => experiment(args),
        Command::Analyze(args) => analyze_cmd(args),
        Command::Fit(args) => fit_cmd(args),
        Command::IngestTimings(args) => ingest_cmd(args),
    }
}

fn generate(args: GenerateArgs) -> Result<()> {
    let config = GeneratorConfig {
        type_weights: args.type_weights.unwrap_or(GeneratorConfig::default().type_weights),
    };
    let (inst, plant) = generate_planted(args.n, args.ratio, args.seed, &config)?;
    debug_assert!(check_assignment(&inst, &plant)?);
    let text = write_dimacs(&inst);
    match &args.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    if let Some(path) = &args.plant_out {
        let bits: String = plant.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        fs::write(path, format!("{bits}\n"))?;
    }
    Ok(())
}

fn solve_cmd(args: SolveArgs) -> Result<()> {
    let inst = load_instance(&args.cnf)?;
    let trajectory = args.trajectory.is_some().then(|| TrajectoryConfig {
        stride: args.stride,
        vars: args.vars.clone(),
    });
    let cfg = IntegratorConfig {
        method: match args.method {
            MethodArg::Euler => Method::ForwardEuler,
            MethodArg::Rk4 => Method::RungeKutta4,
        },
        dt: args.dt,
        noise_strength: args.noise,
        max_steps: args.max_steps,
        init_x_s: args.init_x_s,
        init_x_l: args.init_x_l,
        trajectory,
    };
    let (outcome, log) = solve(&inst, &DmmParams::default(), &cfg, args.seed)?;
    if let (Some(path), Some(log)) = (&args.trajectory, log) {
        fs::write(path, log.to_csv())?;
    }
    println!("{}", serde_json::to_string_pretty(&outcome)?);
    Ok(())
}

fn walksat_cmd(args: WalksatArgs) -> Result<()> {
    let inst = load_instance(&args.cnf)?;
    let cfg = WalkSatConfig {
        noise_prob: args.noise_prob,
        max_flips: args.max_flips,
        seed: args.seed,
    };
    cfg.validate().map_err(|e| anyhow::anyhow!(e))?;
    let (outcome, assignment) = walksat_solve_with_assignment(&inst, &cfg);
    println!("{}", serde_json::to_string_pretty(&outcome)?);
    if args.model && outcome.solved {
        let bits: String = assignment.bits.iter().map(|&b| if b { '1' } else { '0' }).collect();
        println!("{bits}");
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    match args.command {
        ExperimentCommand::Presets => {
            for name in preset_names() {
                println!("{name}");
            }
            Ok(())
        }
        ExperimentCommand::Run(run) => {
            let spec: ExperimentSpec = match (&run.spec, &run.preset) {
                (Some(path), None) => serde_json::from_str(&read_input(path)?)
                    .with_context(|| format!("parsing spec {}", path.display()))?,
                (None, Some(name)) => preset(name)?,
                _ => bail!("provide either a spec file or --preset NAME"),
            };
            let out = out_dir_override(run.out);
            let (table, _, dir) = run_and_persist(&spec, out.as_deref())?;
            let solved = table.rows.iter().filter(|r| r.solved).count();
            eprintln!(
                "{}: {} runs ({} solved, {} censored) -> {}",
                spec.name,
                table.rows.len(),
                solved,
                table.rows.len() - solved,
                dir.display()
            );
            if run.analyze {
                let options = AnalysisOptions {
                    family: run.family.into(),
                    ..Default::default()
                };
                let report = analyze(&table, &options)?;
                write_analysis(&report, &table, &dir)?;
                eprintln!("analysis -> {}", dir.join("analysis.json").display());
            }
            Ok(())
        }
    }
}

fn analyze_cmd(args: AnalyzeArgs) -> Result<()> {
    let results_path = if args.results.is_dir() {
        args.results.join("results.csv")
    } else {
        args.results.clone()
    };
    let table = ResultsTable::read_csv_file(&results_path)?;
    let options = AnalysisOptions {
        family: args.family.into(),
        bootstrap: BootstrapConfig {
            resamples: args.bootstrap_resamples,
            seed: args.bootstrap_seed,
        },
    };
    let report = analyze(&table, &options)?;
    let out = out_dir_override(args.out).unwrap_or_else(|| {
        results_path
            .parent()
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from("."))
    });
    fs::create_dir_all(&out)?;
    write_analysis(&report, &table, &out)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn fit_cmd(args: FitArgs) -> Result<()> {
    let format = timing_format(args.format, args.column.clone())?;
    let timings = ingest_timings(reader_for(&args.input)?, &format)?
        .with_solver(args.solver.clone())
        .with_censored_count(args.censored);
    let sample = Sample::new(timings.times.clone(), timings.censored_count)?;
    let fit = match args.family {
        FamilyArg::Invgauss => fit_invgauss(&sample)?,
        FamilyArg::Exponential => fit_exponential(&sample)?,
        FamilyArg::Weibull => fit_weibull(&sample)?,
    };
    let mut value = serde_json::to_value(&fit)?;
    value["solver"] = serde_json::Value::String(timings.solver);
    println!("{}", serde_json::to_string_pretty(&value)?);
    Ok(())
}

fn ingest_cmd(args: IngestArgs) -> Result<()> {
    let format = timing_format(args.format, args.column.clone())?;
    let timings = ingest_timings(reader_for(&args.input)?, &format)?
        .with_solver(args.solver.clone())
        .with_censored_count(args.censored);
    println!("{}", serde_json::to_string_pretty(&timings)?);
    Ok(())
}
