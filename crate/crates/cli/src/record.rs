use std::collections::BTreeMap;

use graphdim_core::ExponentFit;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const TOOL: &str = "graphdim";

/// Everything a run produced, with enough to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub tool: String,
    pub version: String,
    pub name: String,
    pub kind: String,
    /// Graph family or model the numbers describe.
    pub family: String,
    pub seed: u64,
    /// The parsed config.
    pub config: serde_json::Value,
    pub config_sha256: String,
    /// Data files, relative to the record.
    pub data: Vec<DataFile>,
    pub fits: BTreeMap<String, FitSummary>,
    /// Threshold estimates that are not power-law fits.
    pub estimates: BTreeMap<String, Estimate>,
    pub verdicts: BTreeMap<String, String>,
    pub diagnostics: BTreeMap<String, f64>,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataFile {
    pub file: String,
    pub sha256: String,
    pub rows: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitSummary {
    pub slope: f64,
    pub stderr: f64,
    pub window: [f64; 2],
    pub r2: f64,
    pub n_points: usize,
}

impl From<&ExponentFit> for FitSummary {
    fn from(f: &ExponentFit) -> Self {
        FitSummary {
            slope: f.slope,
            stderr: f.std_error,
            window: f.window,
            r2: f.r_squared,
            n_points: f.n_points,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    /// `null` when the scan could not locate a threshold.
    pub value: Option<f64>,
    pub stderr: Option<f64>,
    pub bracketed: bool,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}
