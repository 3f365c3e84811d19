//! Front end for the `divcurl` binary: config ingestion, dispatch and error
//! reporting.
//!
//! Exit codes: 0 on success, 1 for usage, config, I/O and unsupported-setup
//! errors, 2 when a numerical assertion fails (currently `NotASequence`).
//! Failures print one JSON object `{"error": kind, "message": ..}` to stderr.

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub mod config;
pub mod error;
pub mod execute;

pub use config::{parse_config, parse_config_str, resolve, Cli, Command, FamilyConfig, Preset, Profile, RunConfig};
pub use error::{CliError, CliResult};
pub use execute::{effective_grid, execute, load_sequence};

fn fail(err: &CliError, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "{}", err.to_json());
    err.exit_code()
}

/// Parses `args`, runs the command and reports; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{e}");
            return 0;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail(&CliError::Usage(first.to_string()), stderr);
        }
    };
    match parse_config(&cli).and_then(|cfg| execute(&cfg)) {
        Ok(summary) => {
            let _ = writeln!(stdout, "{summary}");
            0
        }
        Err(e) => fail(&e, stderr),
    }
}
