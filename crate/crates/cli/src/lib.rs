//! The `graphdim` command line: one-shot subcommands, TOML experiment
//! configs, result records and Markdown reports.

pub mod commands;
pub mod config;
pub mod error;
pub mod family;
pub mod output;
pub mod record;
pub mod report;
pub mod run;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::commands::{
    bt::BtCommand, fit::FitArgs, iic::IicCommand, perc::PercCommand, walk::WalkCommand,
};
use crate::config::Config;
use crate::error::{read_file, CliError, CliResult};
use crate::output::pretty;
use crate::record::ResultRecord;

pub use error::CliError as Error;

/// Random graphs and their dimensions. Set GRAPHDIM_THREADS to cap the
/// worker threads; results do not depend on it.
#[derive(Debug, Parser)]
#[command(name = "graphdim", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Bond percolation on Z^d.
    #[command(subcommand)]
    Perc(PercCommand),
    /// Critical Galton-Watson trees and the Kesten tree.
    #[command(subcommand)]
    Iic(IicCommand),
    /// Return probabilities, exit times and resistance.
    #[command(subcommand)]
    Walk(WalkCommand),
    /// Power-law fit of a CSV column.
    Fit(FitArgs),
    /// Discrete Hausdorff and packing dimensions of point sets.
    #[command(subcommand)]
    Bt(BtCommand),
    /// Run a TOML experiment config and write its record.
    Run {
        config: PathBuf,
        /// Overrides `output.dir`.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Markdown summary of result records.
    Report { records: Vec<PathBuf> },
}

/// Execute a parsed command and return what belongs on stdout.
pub fn execute(cli: &Cli) -> CliResult<String> {
    match &cli.command {
        Command::Perc(c) => commands::perc::run(c),
        Command::Iic(c) => commands::iic::run(c),
        Command::Walk(c) => commands::walk::run(c),
        Command::Fit(a) => commands::fit::run(a),
        Command::Bt(c) => commands::bt::run(c),
        Command::Run { config, out_dir } => {
            let text = read_file(config)?;
            let cfg = Config::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", config.display())))?;
            let base = config.parent().map(PathBuf::from).unwrap_or_default();
            let out = out_dir
                .clone()
                .or_else(|| cfg.output.dir.clone())
                .unwrap_or_else(|| PathBuf::from("results").join(cfg.name()));
            let record = run::run_experiment(&cfg, &text, &base, &out)?;
            Ok(pretty(
                &serde_json::to_value(&record).expect("record serializes"),
            ))
        }
        Command::Report { records } => {
            let recs = records
                .iter()
                .map(|p| {
                    serde_json::from_str::<ResultRecord>(&read_file(p)?).map_err(|e| {
                        CliError::Config(format!("{}: not a result record: {e}", p.display()))
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(report::render(&recs))
        }
    }
}
