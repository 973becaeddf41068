//! Command-line front end: SNR sweeps written as CSV plus a JSON summary.

mod config;
mod report;
mod sweep;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::Parser;

pub use config::FileConfig;
pub use report::{asymptote_report, max_gap_report, summarize, AsymptoteReport, MaxGap, Summary};
pub use sweep::{
    run_sweep, run_sweep_detailed, RowDetail, SweepMode, SweepRow, SweepSpec, SweepTable,
};
pub use table::{csv_string, read_csv, round_to_csv, write_csv, CSV_HEADER};

use crate::channel::DbConvention;
use crate::error::Error;
use crate::oracle::OracleConfig;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    /// Process exit status: 2 for bad input, 3 when an iterative method
    /// failed to converge, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(
                Error::InvalidParams(_) | Error::Domain(_) | Error::Infeasible(_),
            ) => 2,
            CliError::Numeric(Error::Convergence { .. } | Error::IterationLimit { .. }) => 3,
            _ => 1,
        }
    }
}

/// Sweep the capacity bounds over an SNR grid.
#[derive(Debug, Parser)]
#[command(name = "fso-capacity", version, about)]
pub struct Args {
    /// Constraint set: peak-avg or avg-only.
    #[arg(long)]
    pub mode: Option<SweepMode>,
    /// Average-to-peak ratio E/A in (0, 1]; peak-avg only.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Lowest grid point in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_min: Option<f64>,
    /// Highest grid point in dB.
    #[arg(long, allow_negative_numbers = true)]
    pub snr_max: Option<f64>,
    /// Grid spacing in dB.
    #[arg(long)]
    pub step: Option<f64>,
    /// power10 (10 log10 of the amplitude ratio) or amplitude20.
    #[arg(long)]
    pub db_convention: Option<DbConvention>,
    /// Also run the numerical capacity oracle at every grid point.
    #[arg(long)]
    pub oracle: bool,
    /// Locally optimize the free parameters of the upper bounds.
    #[arg(long)]
    pub refine: bool,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to write the JSON summary.
    #[arg(long)]
    pub summary_json: Option<PathBuf>,
    /// TOML file with the same settings; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl Args {
    fn as_config(&self) -> FileConfig {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        FileConfig {
            mode: self.mode,
            alpha: self.alpha,
            snr_min: self.snr_min,
            snr_max: self.snr_max,
            step: self.step,
            db_convention: self.db_convention,
            oracle: self.oracle.then_some(true),
            refine: self.refine.then_some(true),
            out: path(&self.out),
            summary_json: path(&self.summary_json),
        }
    }

    /// Settings after merging the config file (if any) under the flags.
    pub fn resolve(&self) -> Result<FileConfig, CliError> {
        let base = match &self.config {
            Some(p) => FileConfig::load(p)?,
            None => FileConfig::default(),
        };
        Ok(base.overlay(self.as_config()))
    }
}

/// Runs the sweep described by `args` and writes its outputs.
pub fn run(args: &Args) -> Result<(), CliError> {
    let cfg = args.resolve()?;
    let spec = cfg.to_spec();
    spec.validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let (table, details) = run_sweep_detailed(&spec, &OracleConfig::default())?;

    match &cfg.out {
        Some(p) => write_csv(&table, BufWriter::new(File::create(p)?))?,
        None => write_csv(&table, std::io::stdout().lock())?,
    }
    if let Some(p) = &cfg.summary_json {
        let summary = summarize(&spec, &table, details)?;
        let mut w = BufWriter::new(File::create(p)?);
        serde_json::to_writer_pretty(&mut w, &summary)?;
        writeln!(w)?;
        w.flush()?;
    }
    Ok(())
}
