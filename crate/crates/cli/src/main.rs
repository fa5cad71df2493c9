use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use geophase_cli::formats::{read_json, ModelSpec, PathSource};
use geophase_cli::scenario::{
    run_ab, run_closure, run_custom, run_propagate, run_scenario, run_spin, AbSweepConfig, ClosureConfig, Context,
    CustomConfig, EngineKind, PropagateConfig, Scenario, SpinExperimentConfig,
};
use geophase_cli::{CliError, Format, Table};

/// Adiabatic geometric phases: scenario runner and single-shot tools.
#[derive(Parser)]
#[command(name = "geophase", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for shot noise.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Timing and row counts on stderr.
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file.
    Run {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Geometric phase of the box state versus the displacement angle.
    AbSweep {
        #[arg(long, default_value_t = 0.3)]
        eta: f64,
        #[arg(long, default_value_t = 1.5 * std::f64::consts::PI)]
        delta_theta: f64,
        #[arg(long, default_value_t = 1)]
        mode: u32,
        #[arg(long, default_value_t = 401)]
        steps: usize,
        #[arg(long, default_value_t = 4096)]
        nodes: usize,
    },
    /// Exit polarization of a spin carried along a field path.
    SpinExperiment {
        #[arg(long)]
        theta0: f64,
        /// Path file with R = [theta, phi]; defaults to phi: 0 -> pi/2 at theta0.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        omega_b: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        shots: Option<u64>,
        /// Exit times for fitting gamma mod pi (repeatable).
        #[arg(long = "exit-time")]
        exit_times: Vec<f64>,
        #[arg(long)]
        dt: Option<f64>,
    },
    /// Great-circle closure of an open Bloch-sphere path.
    Closure {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        arc_samples: Option<usize>,
    },
    /// Phase decomposition at every sample of a path.
    Phase {
        /// Model file, or `conical` / `spin` for the default parameters.
        #[arg(long)]
        model: String,
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long, value_enum, default_value = "auto")]
        engine: EngineArg,
    },
    /// Exact trajectory from an instantaneous eigenstate.
    Propagate {
        #[arg(long)]
        model: String,
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 0)]
        level: usize,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        duration_multiplier: f64,
        #[arg(long, default_value_t = 1)]
        stride: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum EngineArg {
    Auto,
    Numeric,
}

fn model_arg(s: &str) -> Result<ModelSpec, CliError> {
    match s {
        "conical" => Ok(ModelSpec::Conical { radius: 1.0 }),
        "spin" => Ok(ModelSpec::Spin { omega_b: 1.0 }),
        file => read_json(Path::new(file)),
    }
}

fn path_arg(p: PathBuf) -> PathSource {
    PathSource::File(p.to_string_lossy().into_owned())
}

struct Output {
    table: Table,
    scenario: String,
    /// Single-result commands emit a flat JSON object.
    single: bool,
    default_format: Format,
    default_out: Option<PathBuf>,
}

fn execute(cli: Cli) -> Result<(), CliError> {
    let common = cli.common;
    if let Some(jobs) = common.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .map_err(|e| CliError::schema(format!("--jobs: {e}")))?;
    }
    let ctx = Context { seed: common.seed, ..Context::default() };
    let started = Instant::now();

    let out = match cli.command {
        Command::Run { scenario } => {
            let s: Scenario = read_json(&scenario)?;
            let base = scenario.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf);
            let spec = s.output.clone();
            let format = match spec.as_ref().and_then(|o| o.format.as_deref()) {
                None => Format::Csv,
                Some(f) => Format::parse(f).ok_or_else(|| CliError::schema(format!("unknown output format {f:?}")))?,
            };
            let table = run_scenario(&s, &Context { base: base.clone(), ..ctx })?;
            Output {
                table,
                scenario: s.name,
                single: false,
                default_format: format,
                default_out: spec.and_then(|o| o.path).map(|p| base.join(p)),
            }
        }
        Command::AbSweep { eta, delta_theta, mode, steps, nodes } => Output {
            table: run_ab(&AbSweepConfig { eta, delta_theta, mode, steps, nodes })?,
            scenario: "ab-sweep".into(),
            single: false,
            default_format: Format::Csv,
            default_out: None,
        },
        Command::SpinExperiment { theta0, path, omega_b, t, shots, exit_times, dt } => {
            let cfg = SpinExperimentConfig { theta0, omega_b, t, path: path.map(path_arg), shots, exit_times, dt };
            Output {
                table: run_spin(&cfg, &ctx)?,
                scenario: "spin-experiment".into(),
                single: true,
                default_format: Format::Json,
                default_out: None,
            }
        }
        Command::Closure { path, arc_samples } => Output {
            table: run_closure(&ClosureConfig { path: Some(path_arg(path)), arc_samples }, &ctx)?,
            scenario: "geodesic-closure".into(),
            single: true,
            default_format: Format::Json,
            default_out: None,
        },
        Command::Phase { model, path, level, engine } => {
            let engine = match engine {
                EngineArg::Auto => EngineKind::Auto,
                EngineArg::Numeric => EngineKind::Numeric,
            };
            let cfg = CustomConfig { model: model_arg(&model)?, path: Some(path_arg(path)), level, engine };
            Output {
                table: run_custom(&cfg, &ctx)?,
                scenario: "phase".into(),
                single: false,
                default_format: Format::Csv,
                default_out: None,
            }
        }
        Command::Propagate { model, path, level, dt, duration_multiplier, stride } => {
            let cfg = PropagateConfig {
                model: model_arg(&model)?,
                path: Some(path_arg(path)),
                level,
                dt,
                duration_multiplier,
                stride,
            };
            Output {
                table: run_propagate(&cfg, &ctx)?,
                scenario: "propagate".into(),
                single: false,
                default_format: Format::Csv,
                default_out: None,
            }
        }
    };

    let format = common.format.unwrap_or(out.default_format);
    let text = match format {
        Format::Csv => out.table.to_csv(),
        Format::Json if out.single => out.table.to_json_object(),
        Format::Json => out.table.to_json_document(&out.scenario),
    };
    match common.out.or(out.default_out) {
        Some(p) => fs::write(&p, text).map_err(|source| CliError::Io { path: p, source })?,
        None => print!("{text}"),
    }
    if common.verbose {
        eprintln!("{}: {} rows in {:.3} s", out.scenario, out.table.rows.len(), started.elapsed().as_secs_f64());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.class());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
