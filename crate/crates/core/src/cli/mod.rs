//! Command-line front end: configuration, subcommands and emitters.
//!
//! Each subcommand turns a [`RunConfig`] into a [`Table`], written as CSV or
//! JSON to a file or standard output. Diagnostics go to standard error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{cmd_figure1, cmd_noise_budget, cmd_oracle, cmd_sweep, cmd_table2, cmd_theta};
pub use config::{
    DeformationConfig, Figure1Config, Format, NoiseConfig, OracleConfig, OutputConfig, PulseConfig, RunConfig,
    SweepConfig, SweepParameter,
};
pub use output::{Cell, Table};

use crate::error::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CONFIG: i32 = 2;
    pub const REGIME: i32 = 3;
    pub const CUTOFF: i32 = 4;
    pub const IO: i32 = 5;
    pub const NUMERIC: i32 = 6;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration: {0}")]
    Config(String),
    #[error("i/o: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Io(_) => exit::IO,
            CliError::Model(e) => match e {
                Error::OutOfRegime { .. } => exit::REGIME,
                Error::CutoffInsufficient { .. } => exit::CUTOFF,
                Error::InvalidParameter { .. }
                | Error::InvalidDimension { .. }
                | Error::NotNormalized(_)
                | Error::Parse { .. } => exit::CONFIG,
                Error::NonFinite(_) | Error::GridTooCoarse { .. } | Error::DimensionMismatch { .. } => {
                    exit::NUMERIC
                }
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gup-optomech", version, about = "Deformed-commutator phase, oracle, sensitivity and noise analyses")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for Monte Carlo estimates.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; all cores when omitted.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Allow a [constants] section in the configuration.
    #[arg(long, global = true)]
    pub unsafe_constants: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Deformation phase Θ and the resolvable strength.
    Theta,
    /// Analytic against numerically exact mean field.
    Oracle,
    /// The three reference parameter columns.
    Table2,
    /// Θ and resolvable strength over a parameter grid.
    Sweep,
    /// Standard and modified uncertainty curves.
    Figure1,
    /// Requirement checklist and composite signal reduction.
    NoiseBudget,
}

pub fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let config = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            RunConfig::parse(&text)?
        }
        None => RunConfig::default(),
    };
    config.check_constants(cli.unsafe_constants)?;
    config.validate()?;
    Ok(config)
}

/// Builds the table for `command` without writing it.
pub fn execute(command: Command, config: &RunConfig, seed: u64) -> Result<Table, CliError> {
    match command {
        Command::Theta => cmd_theta(config),
        Command::Oracle => cmd_oracle(config),
        Command::Table2 => cmd_table2(),
        Command::Sweep => cmd_sweep(config),
        Command::Figure1 => cmd_figure1(config),
        Command::NoiseBudget => cmd_noise_budget(config, seed),
    }
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let config = load_config(cli)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = cli.jobs {
        if j == 0 {
            return Err(CliError::Config("--jobs must be ≥ 1".into()));
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let table = pool.install(|| execute(cli.command, &config, cli.seed))?;
    let format = cli.format.unwrap_or(config.output.format);
    let path = cli
        .output
        .as_ref()
        .map(|p| p.to_string_lossy().into_owned())
        .or_else(|| config.output.path.clone());
    table.emit(format, path.as_deref())
}

/// Entry point for the binary: parses arguments, runs, reports, and returns
/// the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::CONFIG } else { exit::OK };
        }
    };
    match run(&cli) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
