//! Command-line pipeline: learn a diary model from raw records, generate
//! synthetic trajectories, measure them, compare models against reference
//! data, and cluster typical weeks.
//!
//! Exit codes: 0 success, 2 configuration error, 3 data error.

mod commands;
mod manifest;

use clap::Parser;

#[derive(Parser)]
#[command(
    name = "ditras",
    version,
    about = "Diary-based generation and evaluation of synthetic mobility trajectories"
)]
struct Cli {
    #[command(subcommand)]
    command: commands::Command,
}

/// Errors split by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Invalid flags or inconsistent configuration (exit 2).
    Config(String),
    /// Unreadable, malformed or insufficient input data (exit 3).
    Data(String),
}

impl From<ditras::Error> for CliError {
    fn from(e: ditras::Error) -> Self {
        use ditras::Error::*;
        match e {
            ConfigMismatch(_) => CliError::Config(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => {}
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            std::process::exit(3);
        }
    }
}
