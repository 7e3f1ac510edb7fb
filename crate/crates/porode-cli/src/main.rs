//! `porode`: command-line front end of the porosity defeaturing estimator.
//!
//! Exit codes: 0 success, 1 benchmark assertions failed, 2 invalid input,
//! 3 solver failure.

mod commands;
mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use porode::PorodeError;

use config::{Builtin, ResolvedRun, RunConfig, Verbosity};

/// Default parent directory of the per-run output directories.
const DEFAULT_OUTPUT_DIR: &str = "porode-runs";

#[derive(Debug, Parser)]
#[command(name = "porode", version, about = "Second-order porosity defeaturing estimator (2D plane stress)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Run-configuration JSON file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Parent directory of the timestamped run directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Maximum number of worker threads.
    #[arg(long, global = true, value_name = "N", value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
    /// Built-in geometry used when the configuration names no model.
    #[arg(long, global = true, value_name = "NAME")]
    seed_geometry: Option<Builtin>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the functional of the porous model from reference solves.
    Estimate,
    /// Estimate and compare against a direct analysis of the porous model.
    Verify,
    /// Run a built-in benchmark sweep (`all` runs every benchmark).
    Benchmark {
        /// Benchmark name or `all`.
        name: String,
    },
    /// Report mesh statistics, pore standoffs and interaction pairs.
    MeshInfo,
}

const EXIT_ASSERTIONS: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_SOLVER: u8 = 3;

fn init_logging(verbosity: Verbosity) {
    let env = env_logger::Env::new().filter_or("PORODE_LOG", verbosity.filter());
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

fn load_config(cli: &Cli) -> porode::Result<RunConfig> {
    let config = match &cli.config {
        Some(path) => {
            let base = path.parent().unwrap_or(Path::new("")).to_path_buf();
            RunConfig::read(path)?.rebase(&base)
        }
        None => match cli.seed_geometry {
            Some(seed) => RunConfig::seed(seed),
            None => {
                return Err(PorodeError::validation(
                    "either --config or --seed-geometry is required",
                ))
            }
        },
    };
    match cli.seed_geometry {
        Some(seed) => config.with_seed(seed),
        None => Ok(config),
    }
}

fn run(cli: &Cli) -> porode::Result<bool> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(usize::from(n))
            .build_global()
            .map_err(|e| PorodeError::validation(format!("--threads: {e}")))?;
    }
    if let Command::Benchmark { name } = &cli.command {
        let config = match &cli.config {
            Some(_) => Some(load_config(cli)?),
            None => None,
        };
        init_logging(config.as_ref().map_or_else(Verbosity::default, |c| c.verbosity));
        let out = output_dir(cli, config.as_ref());
        return commands::benchmark_cmd(name, &out);
    }
    let config = load_config(cli)?;
    init_logging(config.verbosity);
    let resolved = ResolvedRun::resolve(&config)?;
    let out = output_dir(cli, Some(&config));
    match cli.command {
        Command::Estimate => commands::estimate_cmd(&config, &resolved, &out),
        Command::Verify => commands::verify_cmd(&config, &resolved, &out),
        Command::MeshInfo => commands::mesh_info_cmd(&config, &resolved, &out),
        Command::Benchmark { .. } => unreachable!("handled above"),
    }
}

fn output_dir(cli: &Cli, config: Option<&RunConfig>) -> PathBuf {
    cli.out
        .clone()
        .or_else(|| config.and_then(|c| c.output_dir.clone()))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_ASSERTIONS),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { EXIT_VALIDATION } else { EXIT_SOLVER })
        }
    }
}
