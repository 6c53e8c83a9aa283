//! `finsler-lab`: report, verify, scan and list the built-in metrics.
//!
//! Exit codes: 0 when every check agrees with the expected flags, 2 when an
//! identity fails, 1 on usage or configuration errors.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, Kind, ZooAction};

/// Caps the rayon worker pool.
const THREADS_ENV: &str = "FINSLER_LAB_THREADS";

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

fn init_pool() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads = raw
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| {
            CliError::Usage(format!(
                "{THREADS_ENV} must be a positive integer, got `{raw}`"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Usage(e.to_string()))
}

fn run(cli: Cli) -> Result<bool, CliError> {
    init_pool()?;
    match cli.command {
        Command::Report(a) => commands::report(&a.config(Kind::Report)?),
        Command::Verify(a) => commands::verify(&a.config(Kind::Verify)?),
        Command::Scan(a) => commands::scan(&a.config(Kind::Scan)?),
        Command::Zoo {
            action: ZooAction::List { n },
        } => commands::zoo_list(n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Failure(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(2)
        }
    }
}
