mod cli;
mod commands;
mod config;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};

/// Error classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Unreadable or malformed input, or an I/O failure: exit 1.
    Input(anyhow::Error),
    /// Planning failed or inputs disagree with each other: exit 2.
    Plan(anyhow::Error),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AUTOCINE_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan(a) => commands::plan(a),
        Command::Render(a) => commands::render(a),
        Command::Synth(a) => commands::synth(a),
        Command::Inspect(a) => commands::inspect(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Plan(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
