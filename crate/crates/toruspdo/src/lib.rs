//! File formats, report assembly and the command-line frontend for
//! [`toruspdo_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod formats;
pub mod json;
pub mod report;

use std::ffi::OsString;

use clap::Parser;

pub use commands::{execute, Outcome, EXIT_ERROR, EXIT_OK, EXIT_UNDECIDED};
pub use config::{Cli, Command, RunConfig, Settings};
pub use error::{CliError, Result};

/// Parse arguments, run, and write the output to `--out` or return it for stdout.
pub fn run<I, T>(args: I) -> std::result::Result<Outcome, (i32, String)>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| (e.exit_code(), e.render().to_string()))?;
    let out = cli.out.clone();
    let outcome = RunConfig::resolve(cli)
        .and_then(|cfg| execute(&cfg))
        .map_err(|e| (EXIT_ERROR, format!("error[{}]: {e}", e.code())))?;
    match out {
        Some(path) => {
            formats::write_text(&path, &outcome.body).map_err(|e| (EXIT_ERROR, format!("error[{}]: {e}", e.code())))?;
            Ok(Outcome { body: String::new(), ..outcome })
        }
        None => Ok(outcome),
    }
}
