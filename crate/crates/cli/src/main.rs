mod args;
mod commands;
mod config;
mod error;
mod format;

use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;
use error::{io_error, CliError};

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut err = io::stderr();
    let mut streams = commands::Streams {
        out: &mut out,
        err: &mut err,
    };
    match &cli.command {
        Command::Threshold(a) => commands::threshold_cmd(a, &cfg, &mut streams)?,
        Command::Pfa(a) => commands::pfa_cmd(a, &cfg, &mut streams)?,
        Command::Density(a) => commands::density_cmd(a, &cfg, &mut streams)?,
        Command::Simulate(a) => commands::simulate_cmd(a, &cfg, &mut streams)?,
        Command::Sweep(a) => commands::sweep_cmd(a, &cfg, &mut streams)?,
        Command::Scan(a) => commands::scan_cmd(a, &cfg, &mut streams)?,
    }
    out.flush().map_err(io_error("writing output"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
