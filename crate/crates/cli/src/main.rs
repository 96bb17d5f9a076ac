//! `torres`: residue decompositions of μ-functions from the command line.

mod commands;
mod config;
mod table;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{RunConfig, RunFlags};
use torus_residue::error::Error;

#[derive(Parser, Debug)]
#[command(name = "torres", version, about = "Exact residue calculus for mu-functions on character tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: RunFlags,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Roots, coroots, Weyl group order and inner product.
    Rootsys,
    /// The factored mu-function and its singular arrangement.
    Mu,
    /// Residual cosets, their orbits and the nonvanishing sums.
    Residual,
    /// The contour-walk decomposition, raw and grouped by Weyl orbits.
    Decompose,
    /// Numeric check of the decomposition identity.
    Verify {
        /// Random Laurent-polynomial multipliers checked besides 1.
        #[arg(long, default_value_t = 3)]
        multipliers: usize,
    },
}

/// Failures with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config (exit 2).
    Usage(String),
    /// The engine failed (exit 3).
    Engine(Error),
    /// Output could not be written (exit 3).
    Io(String),
    /// The numeric verification did not pass (exit 1).
    VerifyFailed,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(_) | Error::InvalidInput(_) | Error::Parse(_) => CliError::Usage(e.to_string()),
            other => CliError::Engine(other),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.flags)?;
    match cli.command {
        Command::Rootsys => commands::rootsys(&cfg),
        Command::Mu => commands::mu(&cfg),
        Command::Residual => commands::residual(&cfg),
        Command::Decompose => commands::decompose(&cfg),
        Command::Verify { multipliers } => commands::verify(&cfg, multipliers),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::VerifyFailed) => {
            eprintln!("verification failed");
            ExitCode::from(1)
        }
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(CliError::Engine(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
        Err(CliError::Io(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}
