//! Command-line front end for `disguise-core`.
//!
//! Every subcommand prints `key=value` lines on stdout so scripts can grep
//! results. Exit codes: 0 success, 1 usage error, 2 data or format error,
//! 3 invariant violation.

pub mod args;
mod commands;
pub mod io;

use std::fmt;
use std::process::ExitCode;

use clap::Parser;
use disguise_core::ErrorClass;

pub use args::Cli;

/// Bad or missing command-line options.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_DATA: u8 = 2;
pub const EXIT_INVARIANT: u8 = 3;

/// Maps an error chain onto the documented exit codes.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return EXIT_USAGE;
        }
        if let Some(e) = cause.downcast_ref::<disguise_core::Error>() {
            return match e.class() {
                ErrorClass::Format => EXIT_DATA,
                ErrorClass::Invariant => EXIT_INVARIANT,
            };
        }
    }
    EXIT_DATA
}

/// Parses `args` and runs the selected subcommand, writing results to `out`.
pub fn run_with<I, T>(args: I, out: &mut dyn std::io::Write) -> anyhow::Result<()>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    use clap::error::ErrorKind;
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            write!(out, "{}", e.render())?;
            return Ok(());
        }
        Err(e) => return Err(UsageError(e.render().to_string()).into()),
    };
    commands::dispatch(cli.command, out)
}

pub fn main_entry() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("DISGUISE_LOG", "warn")).init();
    let mut stdout = std::io::stdout().lock();
    match run_with(std::env::args_os(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            if code == EXIT_USAGE {
                eprintln!("{err}");
            } else {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(code)
        }
    }
}
