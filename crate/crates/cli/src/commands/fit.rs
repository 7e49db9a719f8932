use std::path::PathBuf;

use clap::{Args, ValueEnum};
use graphdim_core::dimension::{classify_recurrence, fit_exponent, spectral};
use graphdim_core::ExponentFit;
use serde::{Deserialize, Serialize};

use super::parse_window;
use crate::error::{config, read_file, CliResult, Context};
use crate::output::{pretty, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    /// Ball growth.
    Df,
    /// Return probabilities; the slope is rescaled by -2.
    Ds,
    /// Box mass growth.
    Dm,
    /// Exit times.
    Beta,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// CSV with a `k` column and a `value` or `mean` column.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
    #[arg(long, value_enum)]
    pub kind: FitKind,
}

/// The JSON emitted by `fit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReport {
    pub kind: FitKind,
    pub slope: f64,
    pub stderr: f64,
    pub window: [f64; 2],
    pub r2: f64,
    pub n_points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
}

impl FitReport {
    pub fn new(kind: FitKind, f: &ExponentFit) -> FitReport {
        FitReport {
            kind,
            slope: f.slope,
            stderr: f.std_error,
            window: f.window,
            r2: f.r_squared,
            n_points: f.n_points,
            verdict: (kind == FitKind::Ds).then(|| classify_recurrence(f).to_string()),
        }
    }
}

/// Fit `kind` to `(k, value)` points.
pub fn fit_points(
    kind: FitKind,
    pts: &[(f64, f64)],
    window: Option<(f64, f64)>,
) -> graphdim_core::Result<ExponentFit> {
    let f = fit_exponent(pts, window)?;
    Ok(if kind == FitKind::Ds { spectral(f) } else { f })
}

pub fn run(a: &FitArgs) -> CliResult<String> {
    let text = read_file(&a.input)?;
    let (header, rows) = Table::parse_csv(&text)
        .map_err(|e| crate::error::CliError::Config(format!("{}: {e}", a.input.display())))?;
    let col = |name: &str| header.iter().position(|h| h == name);
    let (Some(k), Some(v)) = (col("k"), col("value").or_else(|| col("mean"))) else {
        return config(format!(
            "{}: need columns `k` and `value` or `mean`",
            a.input.display()
        ));
    };
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r[k], r[v])).collect();
    let f = fit_points(a.kind, &pts, a.window).context("fitting")?;
    Ok(pretty(
        &serde_json::to_value(FitReport::new(a.kind, &f)).expect("plain struct"),
    ))
}
