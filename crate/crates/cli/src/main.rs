mod artifact;
mod cli;
mod commands;
mod svg;

use std::fmt;
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};

/// Outcome of a run that completed without an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Passed,
    /// A verification inside the run was violated.
    Failed,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or violated preconditions; exit code 2.
    Usage(String),
    /// I/O or serialization failure; exit code 1.
    Io(String),
}

impl CliError {
    pub fn usage(msg: impl fmt::Display) -> Self {
        CliError::Usage(msg.to_string())
    }

    pub fn io(err: impl fmt::Display) -> Self {
        CliError::Io(err.to_string())
    }

    pub fn output(path: &Path, err: impl fmt::Display) -> Self {
        CliError::Io(format!("cannot write {}: {err}", path.display()))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<paracalc_core::Error> for CliError {
    fn from(e: paracalc_core::Error) -> Self {
        CliError::usage(e)
    }
}

fn run(cli: Cli) -> Result<Status, CliError> {
    match cli.command {
        Command::Domains(a) => commands::domains(&a),
        Command::MinimalN(a) => commands::minimal_n(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::ParaproductCheck(a) => commands::paraproduct_check(&a),
        Command::Smoothness(a) => commands::smoothness(&a),
        Command::SmoothingProfile(a) => commands::smoothing_profile(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Status::Passed) => ExitCode::SUCCESS,
        Ok(Status::Failed) => ExitCode::from(1),
        Err(e @ CliError::Usage(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e @ CliError::Io(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
