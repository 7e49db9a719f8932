use std::path::PathBuf;

use clap::{Args, Subcommand};
use graphdim_core::barlow_taylor::{
    dimension_scan, recurrence_by_dh, DimensionScan, Kind, Method, PointSet,
};
use serde::{Deserialize, Serialize};

use super::parse_grid;
use crate::error::{config, read_file, CliResult, Context};
use crate::output::{pretty, Format};

#[derive(Debug, Subcommand)]
pub enum BtCommand {
    /// Shell values, growth rates and the threshold over an alpha grid.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// One point per line, coordinates separated by spaces.
    #[arg(long)]
    pub set: PathBuf,
    #[arg(long)]
    pub kind: Kind,
    #[arg(long, default_value = "0:0.1:3", value_parser = parse_grid)]
    pub alpha_grid: std::vec::Vec<f64>,
    /// Packing exponent epsilon.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Last shell; defaults to the smallest `n` with the set inside `Q(2^n)`.
    #[arg(long)]
    pub n_max: Option<u32>,
    #[arg(long, default_value = "greedy")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Curve {
    pub alpha: f64,
    /// Value on shell `n = i + 1`.
    pub shells: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// Fitted slope of `log2` shell value against `n`; `null` when the
    /// shells vanish.
    pub rate: Option<f64>,
    pub rate_stderr: Option<f64>,
}

/// The JSON emitted by `bt scan`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub kind: Kind,
    pub method: Method,
    pub epsilon: Option<f64>,
    pub dim: usize,
    pub points: usize,
    pub n_max: u32,
    pub estimate: Option<f64>,
    pub stderr: Option<f64>,
    pub bracketed: bool,
    /// Recurrence read off `d_H` against `d - 2` (Hausdorff scans only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    pub curves: Vec<Curve>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

impl ScanReport {
    pub fn new(set: &PointSet, method: Method, s: DimensionScan) -> ScanReport {
        let verdict = (s.kind == Kind::Hausdorff && s.bracketed)
            .then(|| recurrence_by_dh(s.estimate, s.std_error, set.dim()).to_string());
        let curves = s
            .curves
            .into_iter()
            .zip(&s.growth)
            .map(|(c, g)| Curve {
                alpha: c.alpha,
                shells: c.shells,
                partial_sums: c.partial_sums,
                rate: finite(g.rate),
                rate_stderr: finite(g.rate).and(finite(g.std_error)),
            })
            .collect();
        ScanReport {
            kind: s.kind,
            method,
            epsilon: s.epsilon,
            dim: set.dim(),
            points: set.len(),
            n_max: s.n_max,
            estimate: finite(s.estimate),
            stderr: finite(s.std_error),
            bracketed: s.bracketed,
            verdict,
            curves,
        }
    }

    /// Long format: `alpha,n,value,partial_sum`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("alpha,n,value,partial_sum\n");
        for c in &self.curves {
            for (i, (v, s)) in c.shells.iter().zip(&c.partial_sums).enumerate() {
                out.push_str(&format!("{},{},{v},{s}\n", c.alpha, i + 1));
            }
        }
        out
    }
}

/// Smallest `n >= 3` with every point inside `Q(2^n)`.
pub fn default_n_max(set: &PointSet) -> u32 {
    let r = set
        .iter()
        .flat_map(|p| p.iter().map(|c| c.unsigned_abs()))
        .max()
        .unwrap_or(0);
    let mut n = 3;
    while (1u64 << n) < r as u64 {
        n += 1;
    }
    n
}

pub fn scan(
    set: &PointSet,
    kind: Kind,
    alphas: &[f64],
    eps: Option<f64>,
    n_max: Option<u32>,
    method: Method,
) -> CliResult<ScanReport> {
    if kind == Kind::Packing && eps.is_none() {
        return config("packing scans need --eps");
    }
    let n_max = n_max.unwrap_or_else(|| default_n_max(set));
    let s =
        dimension_scan(set, alphas, n_max, kind, eps, method).context(format!("{kind} scan"))?;
    Ok(ScanReport::new(set, method, s))
}

pub fn run(cmd: &BtCommand) -> CliResult<String> {
    let BtCommand::Scan(a) = cmd;
    let set =
        PointSet::parse(&read_file(&a.set)?).context(format!("reading {}", a.set.display()))?;
    let report = scan(&set, a.kind, &a.alpha_grid, a.eps, a.n_max, a.method)?;
    Ok(match a.out {
        Format::Json => pretty(&serde_json::to_value(&report).expect("plain struct")),
        Format::Csv => report.to_csv(),
    })
}
