//! `l2p` command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a solve hit
//! its iteration limit without meeting the tolerance.

use std::ffi::OsString;

use clap::Parser;

pub mod args;
pub mod commands;
pub mod manifest;
pub mod output;

pub use args::Cli;
pub use manifest::RunManifest;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;

/// How a command that ran to the end went.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    NotConverged,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Self::Done => EXIT_OK,
            Self::NotConverged => EXIT_NOT_CONVERGED,
        }
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_INPUT,
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(outcome) => {
            if outcome == Outcome::NotConverged {
                eprintln!("warning: iteration limit reached before the tolerance was met");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_INPUT
        }
    }
}
