//! Batch front end behind the `ruinkit` binary.

pub mod commands;
pub mod config;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::RuinError;
use commands::Report;
use config::RunConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Ruin(#[from] RuinError),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override a config key, e.g. `--set model.theta=0.2`.
    #[arg(long = "set", value_name = "K=V")]
    pub set: Vec<String>,
    /// Output file; defaults to the config's `output`, then stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Parser)]
#[command(name = "ruinkit", version, about = "Exact and approximate ruin probabilities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Approximations on a grid, with optional exact and error columns.
    Approx(Common),
    /// The exact (rational, Talbot or Monte Carlo) ruin function.
    Exact(Common),
    /// Creeping and jump components of the perturbed approximations.
    Perturbed(Common),
    /// Johnson–Taaffe indices and Erlang-mixture fits.
    Jt(Common),
    /// Claim, ladder-height and aggregate-loss moments.
    Moments(Common),
    /// Admissibility of an explicit mixture or of each method.
    Check(Common),
}

pub fn write_csv<W: Write>(rep: &Report, w: W) -> Result<(), CliError> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
    wr.write_record(&rep.header)?;
    for r in &rep.rows {
        wr.write_record(r)?;
    }
    wr.flush()?;
    Ok(())
}

/// Runs one command; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let (common, f): (&Common, fn(&RunConfig) -> Result<Report, CliError>) = match &cli.command {
        Command::Approx(c) => (c, commands::cmd_approx),
        Command::Exact(c) => (c, commands::cmd_exact),
        Command::Perturbed(c) => (c, commands::cmd_perturbed),
        Command::Jt(c) => (c, commands::cmd_jt),
        Command::Moments(c) => (c, commands::cmd_moments),
        Command::Check(c) => (c, commands::cmd_check),
    };
    match execute(common, f) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn execute(common: &Common, f: fn(&RunConfig) -> Result<Report, CliError>) -> Result<bool, CliError> {
    let cfg = RunConfig::load(common.config.as_deref(), &common.set)?;
    let rep = f(&cfg)?;
    for n in &rep.notes {
        eprintln!("note: {n}");
    }
    let out = common.out.clone().or_else(|| cfg.output.as_ref().map(PathBuf::from));
    match (&rep.text, &out) {
        (Some(t), Some(_)) => print!("{t}"),
        (Some(t), None) => {
            print!("{t}");
            return Ok(rep.complete);
        }
        _ => {}
    }
    match out {
        Some(p) => write_csv(&rep, std::fs::File::create(p)?)?,
        None => write_csv(&rep, std::io::stdout().lock())?,
    }
    Ok(rep.complete)
}
