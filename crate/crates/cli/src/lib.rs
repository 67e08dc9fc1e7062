//! Command-line front end for `tomoslice`.
//!
//! Every command resolves its flags into an [`ExperimentConfig`], runs the
//! corresponding library routine and renders a report that embeds the
//! config. Exit status is 0 on success, 2 on a negative verdict and 1 on
//! error.

pub mod args;
pub mod commands;
pub mod config;
pub mod error;

use std::io::Write;

pub use args::{Cli, Command, Format, Options};
pub use commands::{execute, Outcome};
pub use config::ExperimentConfig;
pub use error::CliError;

pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NEGATIVE: u8 = 2;

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "TOMOSLICE_THREADS";

/// Sizes the global rayon pool from [`THREADS_ENV`] when it is set.
pub fn init_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| error::flag("threads", format!("{THREADS_ENV}=`{value}` is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| error::flag("threads", e.to_string()))
}

/// Resolves the config, executes the command and writes the report.
/// Returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let config = ExperimentConfig::resolve(cli)?;
    let outcome = execute(&config)?;
    match &config.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        })?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(outcome.text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Write {
                    path: "<stdout>".into(),
                    source,
                })?;
        }
    }
    Ok(if outcome.negative { EXIT_NEGATIVE } else { EXIT_OK })
}
