//! `qup`: lacunarity checks, Weyl characters and the SU(2) uncertainty
//! experiment from the command line.
//!
//! Exit codes: 0 when the checked property or every pipeline assertion
//! holds, 1 when it does not, 2 for usage and parameter errors.

mod character;
mod config;
mod experiment;
mod lacunary;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] qup::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(qup::Error::Consistency(_)) => 1,
            _ => 2,
        }
    }
}

/// Outcome of a command that ran to completion.
pub enum Verdict {
    Holds,
    Fails,
}

impl Verdict {
    pub fn from_bool(holds: bool) -> Self {
        if holds {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qup",
    version,
    about = "Lacunary spectra and uncertainty on compact Lie groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Q-thin / lacunary predicates, minimal covers and the product-box condition.
    Lacunary {
        #[command(subcommand)]
        command: lacunary::LacunaryCommand,
    },
    /// Weyl character of an irreducible representation.
    Character(character::CharacterArgs),
    /// Run the SU(2) uncertainty pipeline from a config file.
    Experiment(experiment::ExperimentArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Lacunary { command } => lacunary::run(command),
        Command::Character(args) => character::run(args),
        Command::Experiment(args) => experiment::run(args),
    };
    match result {
        Ok(Verdict::Holds) => ExitCode::SUCCESS,
        Ok(Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qup: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Writes `text` to `path`, or stdout when no path is given.
pub fn emit(text: &str, path: Option<&PathBuf>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
