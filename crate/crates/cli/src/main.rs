//! `holder2d`: reproducible experiments on Hölder exponents of
//! unit-determinant divergence-form equations in the plane.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::report::Output;

#[derive(Debug, Parser)]
#[command(
    name = "holder2d",
    version,
    about = "Hölder exponent experiments for 2D unit-determinant elliptic equations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for report.json and CSV files.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Exponent estimates α, ᾱ and the comparison bounds.
    Alpha,
    /// Weighted Wirtinger constant: closed form against the discrete eigenvalue.
    Wirtinger,
    /// Extremal example: weak residual, FEM solution and measured exponent.
    Sharp,
    /// Dirichlet problem on a graded disk mesh.
    Solve,
    /// Energy trace, exponent fit and sampled Hölder seminorm of a FEM solution.
    Measure,
}

fn run(cli: &Cli) -> CliResult<()> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <path> is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let out = Output::create(&cli.out)?;
    match cli.command {
        Command::Alpha => commands::alpha(&cfg, &out),
        Command::Wirtinger => commands::wirtinger(&cfg, &out),
        Command::Sharp => commands::sharp(&cfg, &out),
        Command::Solve => commands::solve_cmd(&cfg, &out),
        Command::Measure => commands::measure(&cfg, &out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("holder2d: {e}");
            e.exit_code()
        }
    }
}
