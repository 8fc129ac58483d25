//! The `anisowalk` command line: configuration, subcommands and output.
//!
//! [`run`] is the whole program; the binary only forwards its arguments and
//! exit status.

mod args;
mod commands;
mod config;
mod error;
mod output;
mod source;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use config::ExperimentConfig;
use error::{CliError, CliResult};
use output::Sink;

pub use output::VERSION;

fn dispatch(cli: &Cli, cfg: &ExperimentConfig) -> CliResult<Option<CliError>> {
    let sink = Sink::new(cli.command.name(), cfg);
    let (report, failure) = match &cli.command {
        Command::TreeCalc(_) => (commands::tree_calc(cfg)?, None),
        Command::Gen(_) => {
            commands::gen(cfg)?;
            return Ok(None);
        }
        Command::Mix(_) => commands::mix(cfg)?,
        Command::Spectra(_) => (commands::spectra(cfg)?, None),
        Command::Nb(_) => (commands::nb(cfg)?, None),
        Command::Verify(a) => commands::verify(cfg, a.suite)?,
        Command::Cutoff(_) => (commands::cutoff(cfg)?, None),
    };
    sink.emit(&report)?;
    Ok(failure)
}

fn execute(cli: &Cli) -> CliResult<Option<CliError>> {
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::load(path, cli.command.name())?,
        None => ExperimentConfig::default(),
    }
    .overlay(cli);
    cfg.validate()?;
    match cfg.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::validation(format!("thread pool: {e}")))?
            .install(|| dispatch(cli, &cfg)),
        None => dispatch(cli, &cfg),
    }
}

fn fail(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json_line());
    e.kind.exit_code()
}

/// Runs one command line (program name first) and returns the exit status:
/// 0 on success, 1 for usage errors, 2 for invalid input, 3 for numerical
/// failures. Errors are printed to standard error as a single JSON line.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => fail(&CliError::usage(e.to_string().trim())),
            };
        }
    };
    match execute(&cli) {
        Ok(None) => 0,
        Ok(Some(e)) | Err(e) => fail(&e),
    }
}
