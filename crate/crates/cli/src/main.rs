//! `pagd`: run, compare and audit anchored gradient methods.
//!
//! Exit codes: 0 pass, 1 audit failure, 2 numeric failure, 3 usage or
//! config error.

mod commands;
mod config;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::ExperimentConfig;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numeric(String),
}

pub enum Outcome {
    Pass,
    AuditFailed,
}

#[derive(Parser)]
#[command(name = "pagd", version, about = "Run and audit proximal anchored gradient descent")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Replaces the seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for relative output paths.
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: PathBuf,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand)]
enum Command {
    /// Run every configured method and write traces plus a summary.
    Run(ConfigArgs),
    /// Run P-AGD and check every bound of its convergence proof.
    Audit(ConfigArgs),
    /// Run several methods on one instance; combined CSV and optional SVG.
    Compare(ConfigArgs),
    /// Check the schedule's scalar inequalities up to `tmax`.
    CheckScalars {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        tmax: u64,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn load(args: &ConfigArgs) -> Result<ExperimentConfig, CliError> {
    let mut config = ExperimentConfig::load(&args.config)?;
    config.apply_overrides(args.overrides.seed, args.overrides.out_dir.as_deref());
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Run(args) => load(args).and_then(|c| commands::cmd_run(&c)),
        Command::Audit(args) => load(args).and_then(|c| commands::cmd_audit(&c)),
        Command::Compare(args) => load(args).and_then(|c| commands::cmd_compare(&c)),
        Command::CheckScalars { gamma, tmax, overrides } => {
            commands::cmd_check_scalars(*gamma, *tmax, overrides.out_dir.as_deref())
        }
    };
    match result {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::AuditFailed) => ExitCode::from(1),
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
