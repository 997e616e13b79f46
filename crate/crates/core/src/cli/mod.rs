//! The `ppd` command-line tool: `run`, `sweep`, `compare`, `classify` and
//! `bench-info`.
//!
//! Exit codes: 0 on success, 2 on usage errors, 3 when a run aborts or an
//! output cannot be written.

mod commands;
mod config;
pub mod experiments;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand};

pub use commands::{cmd_bench_info, cmd_classify, cmd_compare, cmd_run, cmd_sweep};
pub use config::{parse_config, read_config, ExperimentArgs, ProblemKind, Settings};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "ppd", version, about = "Perturbed proximal descent experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// One optimizer run: trace CSV, SVG plot and a JSON summary line.
    Run(ExperimentArgs),
    /// Gaussian-bump success rate against stepsize for GD and Prox.
    Sweep(ExperimentArgs),
    /// PPD, PD, GD and PGD on the octopus for several dimensions.
    Compare(ExperimentArgs),
    /// Second-order stationarity verdict for a point.
    Classify(ExperimentArgs),
    /// Octopus constants, saddle catalog and diagnostics.
    BenchInfo(ExperimentArgs),
}

/// Parse `args` (program name first), dispatch, and return the exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(a) => Settings::resolve(a).and_then(|s| cmd_run(&s, out)),
        Command::Sweep(a) => Settings::resolve(a).and_then(|s| cmd_sweep(&s, out)),
        Command::Compare(a) => Settings::resolve(a).and_then(|s| cmd_compare(&s, out)),
        Command::Classify(a) => Settings::resolve(a).and_then(|s| cmd_classify(&s, out)),
        Command::BenchInfo(a) => Settings::resolve(a).and_then(|s| cmd_bench_info(&s, out)),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
