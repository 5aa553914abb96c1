//! `alphadiv <experiment> --config file.json [--seed N --out dir --format csv|json]`
//!
//! Writes one file per table plus `manifest.json` into the output directory.
//! The worker count can be set with `ALPHADIV_WORKERS`.

mod config;
mod experiments;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use thiserror::Error;

use config::{Experiment, ExperimentConfig, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] alphadiv::Error),
    #[error("check failed: {0}")]
    Check(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Model(alphadiv::Error::Domain(_) | alphadiv::Error::Unsupported(_)) => 2,
            CliError::Model(_) | CliError::Check(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "alphadiv", version, about = "Run an alphadiv experiment and write its data files")]
struct Cli {
    experiment: Experiment,
    #[arg(long)]
    config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory (default: the config's output.dir, else ./out).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

fn set_workers() -> Result<(), CliError> {
    let Ok(v) = std::env::var("ALPHADIV_WORKERS") else {
        return Ok(());
    };
    let workers: usize = v
        .parse()
        .ok()
        .filter(|&w| w > 0)
        .ok_or_else(|| CliError::Usage(format!("ALPHADIV_WORKERS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot start {workers} workers: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    set_workers()?;
    let mut cfg = ExperimentConfig::load(&cli.config)?;
    if let Some(e) = cfg.experiment {
        if e != cli.experiment {
            return Err(CliError::Usage(format!(
                "config is for {e:?} but {:?} was requested",
                cli.experiment
            )));
        }
    }
    cfg.experiment = Some(cli.experiment);
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.out.is_some() {
        cfg.output.dir = cli.out;
    }
    if cli.format.is_some() {
        cfg.output.format = cli.format;
    }
    cfg.validate()?;
    let report = experiments::run(cli.experiment, &cfg)?;
    let dir = cfg.output.dir.clone().unwrap_or_else(|| PathBuf::from("out"));
    let name = serde_json::to_value(cli.experiment).expect("experiment name");
    output::write_report(&dir, name.as_str().unwrap_or_default(), &cfg, &report)?;
    match report.failure {
        Some(msg) => Err(CliError::Check(msg)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("alphadiv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
