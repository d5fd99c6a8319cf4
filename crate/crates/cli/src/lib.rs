//! `mbk`, the command-line front end of `maxwell-kinetics`.
//!
//! Every subcommand resolves its flags, computes a result through the core
//! crate and renders it as CSV or JSON with a metadata block that is enough
//! to regenerate it. [`run`] is the whole program with its streams passed in,
//! which is what the binary and the integration tests call.
//!
//! Exit codes: [`EXIT_OK`], [`EXIT_CHECK_FAILED`] (only `verify`), and
//! [`EXIT_USAGE`] for bad flags, out-of-domain values and I/O failures.

use std::ffi::OsString;
use std::fmt;
use std::io::{self, Write};

use clap::Parser;

pub mod args;
pub mod commands;
pub mod output;
pub mod parallel;
pub mod verify;

use args::{Cli, Command, OutputArgs};
use output::{write_file, Envelope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Model(maxwell_kinetics::Error),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) => f.write_str(msg),
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "I/O error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<maxwell_kinetics::Error> for CliError {
    fn from(e: maxwell_kinetics::Error) -> Self {
        CliError::Model(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code. Results go to `stdout` or the `--output` file, diagnostics to
/// `stderr`.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = stdout.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "mbk: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let (envelope, out, code) = match command {
        Command::Pdf(a) => (commands::pdf(a)?, &a.output, EXIT_OK),
        Command::Fever(a) => (commands::fever(a)?, &a.output, EXIT_OK),
        Command::Sample(a) => (commands::sample(a)?, &a.output, EXIT_OK),
        Command::Tail(a) => (commands::tail(a)?, &a.output, EXIT_OK),
        Command::Walk(a) => (commands::walk(a)?, &a.output, EXIT_OK),
        Command::Verify(a) => {
            let checks = verify::run_checks(a)?;
            let code = if checks.iter().all(verify::Check::passed) { EXIT_OK } else { EXIT_CHECK_FAILED };
            (verify::envelope(a, &checks), &a.output, code)
        }
    };
    emit(envelope, out, stdout)?;
    Ok(code)
}

/// Renders the whole document in memory, then writes it in one go.
fn emit(envelope: Envelope, out: &OutputArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = envelope.timestamped(out.no_timestamp).render(out.format);
    match &out.output {
        Some(path) => write_file(path, &text)?,
        None => {
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}
