//! `homwit`: witness construction, exact cross-checks, Monte Carlo runs and
//! joining-circuit verification from JSON documents.
//!
//! Exit codes: 0 success, 2 validation error, 3 consistency failure.

mod commands;
mod error;
mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;
use crate::input::Preset;

const THREADS_ENV: &str = "HOMWIT_THREADS";

#[derive(Debug, Parser)]
#[command(name = "homwit", version, about = "Entanglement detection by HOM overlap estimation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON document describing the inputs of the command.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in input document used in place of --config.
    #[arg(long, global = true, value_enum)]
    preset: Option<Preset>,
    /// RNG seed; overrides any seed in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    /// Per-batch counts; simulate only.
    Csv,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Approximate and separable approximate witness of a witness or target state.
    Witness,
    /// Direct, overlap-based and coincidence-based values for a state and witness.
    Exact,
    /// Seeded Monte Carlo run of the counting experiment.
    Simulate,
    /// Run the joining circuit and OAM encoding on a two-photon input.
    CircuitVerify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Witness => "witness",
            Command::Exact => "exact",
            Command::Simulate => "simulate",
            Command::CircuitVerify => "circuit-verify",
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Validation(format!("cannot set up {n} threads: {e}")))
}

fn to_json<T: Serialize>(report: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(report).map_err(|e| CliError::Consistency(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn execute(cli: &Cli) -> Result<Vec<u8>, CliError> {
    let name = cli.command.name();
    if cli.format == Format::Csv && !matches!(cli.command, Command::Simulate) {
        return Err(CliError::Validation(format!(
            "--format csv is only available for simulate, not {name}"
        )));
    }
    let config = cli.config.as_deref();
    match cli.command {
        Command::Witness => to_json(&commands::witness(&input::load(config, cli.preset, name)?, cli.seed)?),
        Command::Exact => to_json(&commands::exact(&input::load(config, cli.preset, name)?)?),
        Command::Simulate => {
            let doc = input::load(config, cli.preset, name)?;
            match cli.format {
                Format::Json => to_json(&commands::simulate_json(&doc, cli.seed)?),
                Format::Csv => commands::simulate_csv(&doc, cli.seed),
            }
        }
        Command::CircuitVerify => {
            let doc = match (config, cli.preset, cli.seed) {
                (None, None, Some(_)) => input::CircuitInput::random(),
                _ => input::load(config, cli.preset, name)?,
            };
            to_json(&commands::circuit_verify(&doc, cli.seed)?)
        }
    }
}

fn emit(cli: &Cli, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| CliError::Validation(format!("cannot write to stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads()
        .and_then(|()| execute(&cli))
        .and_then(|bytes| emit(&cli, &bytes));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("homwit {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
