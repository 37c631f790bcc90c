pub mod config;
pub mod error;
pub mod jobs;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, ValueEnum};

use error::CliError;
use output::Sink;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Time evolution; CSV frames of (t, x, rho, j)
    Evolve,
    /// Free propagator or free density matrix on a set of points
    Kernel,
    /// Closed-form and numerical spectra
    Spectra,
    /// Matrix or imaginary-time eigensolve for the configured potential
    Eigen,
    /// Partition functions from the Bloch equation
    Statmech,
    /// Built-in acceptance checks
    Validate,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Evolve => "evolve",
            Command::Kernel => "kernel",
            Command::Spectra => "spectra",
            Command::Eigen => "eigen",
            Command::Statmech => "statmech",
            Command::Validate => "validate",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fqm", version, about = "Fractional quantum mechanics batch runner")]
pub struct Args {
    #[arg(value_enum)]
    pub command: Command,
    /// TOML run configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory, created if missing
    #[arg(long, default_value = "fqm-out")]
    pub out: PathBuf,
    /// Concurrent jobs; defaults to the number of CPUs
    #[arg(long, env = "FQM_WORKERS")]
    pub workers: Option<usize>,
}

/// Runs a command and returns the files written, in job order.
pub fn run(args: &Args) -> Result<Vec<PathBuf>, CliError> {
    let workers = match args.workers {
        Some(0) => return Err(CliError::domain("workers", "must be at least 1")),
        Some(n) => n,
        None => std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1),
    };
    let cfg = config::load(&args.config)?;
    let jobs = jobs::plan(args.command, &cfg)?;
    std::fs::create_dir_all(&args.out).map_err(|e| CliError::io(&args.out, e))?;
    let sink = Sink { dir: args.out.clone(), command: args.command.name() };
    let outcomes = jobs::run_all(&jobs, &sink, workers)?;
    let mut files: Vec<PathBuf> = outcomes.iter().flat_map(|o| o.files.clone()).collect();
    let reports: Vec<_> = outcomes.into_iter().filter_map(|o| o.report).collect();
    if args.command == Command::Validate {
        for r in &reports {
            println!("{} criterion {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title);
        }
        let failed: Vec<u32> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
        let summary = serde_json::json!({ "passed": failed.is_empty(), "failed": failed });
        files.push(sink.json("validate", &serde_json::json!({ "criteria": reports.iter().map(|r| r.id).collect::<Vec<_>>() }), &summary)?);
        if !failed.is_empty() {
            return Err(CliError::ValidationFailed { failed });
        }
    }
    Ok(files)
}
