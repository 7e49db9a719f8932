//! Log-log regression and the dimension estimators built on it.

use serde::{Deserialize, Serialize};

use crate::error::{arg, Result};
use crate::graph::{BallProfile, MassProfile};
use crate::walk::WalkStats;

/// Least-squares fit of `log value = intercept + slope * log k`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    /// Regression error combined with the drift between the slopes of the
    /// lower and upper halves of the window.
    pub std_error: f64,
    pub window: [f64; 2],
    pub r_squared: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Recurrence {
    Recurrent,
    Transient,
    Inconclusive,
}

impl std::fmt::Display for Recurrence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Recurrence::Recurrent => "recurrent",
            Recurrence::Transient => "transient",
            Recurrence::Inconclusive => "inconclusive",
        })
    }
}

/// Window used when none is given: drop `k < k_max / 16`.
pub fn default_window(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let k_max = points
        .iter()
        .filter(|p| p.0 > 0.0 && p.1 > 0.0)
        .map(|p| p.0)
        .fold(f64::NAN, f64::max);
    (!k_max.is_nan()).then_some((k_max / 16.0, k_max))
}

pub(crate) struct Ols {
    pub slope: f64,
    pub intercept: f64,
    pub se: f64,
    pub r2: f64,
}

pub(crate) fn ols(xy: &[(f64, f64)]) -> Ols {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = xy.iter().map(|p| (p.1 - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xy
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    let se = if xy.len() > 2 {
        (sse / (n - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    let r2 = if syy > 0.0 {
        (1.0 - sse / syy).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ols {
        slope,
        intercept,
        se,
        r2,
    }
}

/// OLS on `(log k, log value)` over points with `k` in the closed window
/// and both coordinates positive.
pub fn fit_exponent(points: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<ExponentFit> {
    let Some((lo, hi)) = window.or_else(|| default_window(points)) else {
        return arg("no positive data to fit");
    };
    if !(lo < hi) {
        return arg(format!("empty fit window [{lo}, {hi}]"));
    }
    let mut xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|&&(k, v)| k > 0.0 && v > 0.0 && k >= lo && k <= hi && v.is_finite())
        .map(|&(k, v)| (k.ln(), v.ln()))
        .collect();
    if xy.len() < 3 {
        return arg(format!(
            "fit window [{lo}, {hi}] holds {} usable points; need at least 3",
            xy.len()
        ));
    }
    xy.sort_by(|a, b| a.0.total_cmp(&b.0));
    if xy.first().unwrap().0 == xy.last().unwrap().0 {
        return arg("all points share one abscissa");
    }
    let full = ols(&xy);
    // Finite-size curvature shows up as disagreement between the halves.
    let mid = 0.5 * (xy[0].0 + xy[xy.len() - 1].0);
    let split = xy.partition_point(|p| p.0 < mid);
    let drift = if split >= 3 && xy.len() - split >= 3 {
        (ols(&xy[..split]).slope - ols(&xy[split..]).slope).abs()
    } else {
        0.0
    };
    let std_error = (full.se * full.se + drift * drift).sqrt();
    Ok(ExponentFit {
        slope: full.slope,
        intercept: full.intercept,
        std_error,
        window: [lo, hi],
        r_squared: full.r2,
        n_points: xy.len(),
    })
}

/// Growth exponent of `|B(k)|`.
pub fn estimate_df(profile: &BallProfile, window: Option<(f64, f64)>) -> Result<ExponentFit> {
    let pts: Vec<_> = profile
        .ball_sizes
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &b)| (k as f64, b as f64))
        .collect();
    fit_exponent(&pts, window)
}

/// `d_s = -2 * slope` of `log P(S_2k = root)` against `log k`.
pub fn estimate_ds(stats: &WalkStats, window: Option<(f64, f64)>) -> Result<ExponentFit> {
    let pts: Vec<_> = stats
        .return_probs
        .iter()
        .enumerate()
        .map(|(i, &p)| ((i + 1) as f64, p))
        .collect();
    fit_exponent(&pts, window).map(spectral)
}

/// Rescale a return-probability fit to the spectral dimension.
pub fn spectral(fit: ExponentFit) -> ExponentFit {
    ExponentFit {
        slope: -2.0 * fit.slope,
        intercept: -2.0 * fit.intercept,
        std_error: 2.0 * fit.std_error,
        ..fit
    }
}

/// Growth exponent of `|V ∩ Q(k)|`.
pub fn estimate_dm(profile: &MassProfile, window: Option<(f64, f64)>) -> Result<ExponentFit> {
    let pts: Vec<_> = profile
        .counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| (k as f64, c as f64))
        .collect();
    fit_exponent(&pts, window)
}

/// Escape exponent from `(r, mean exit time)` pairs; intrinsic data give
/// `beta`, extrinsic data `beta'`.
pub fn estimate_beta(exit_means: &[(f64, f64)], window: Option<(f64, f64)>) -> Result<ExponentFit> {
    fit_exponent(exit_means, window)
}

/// Compare a spectral-dimension fit against the critical value 2.
pub fn classify_recurrence(ds_fit: &ExponentFit) -> Recurrence {
    if ds_fit.slope + 2.0 * ds_fit.std_error < 2.0 {
        Recurrence::Recurrent
    } else if ds_fit.slope - 2.0 * ds_fit.std_error > 2.0 {
        Recurrence::Transient
    } else {
        Recurrence::Inconclusive
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarlowBass {
    pub beta: f64,
    /// `2 d_f / d_s`.
    pub predicted: f64,
    /// `|beta - 2 d_f / d_s| / beta`.
    pub relative_discrepancy: f64,
    /// Error of the discrepancy propagated from the three fits.
    pub std_error: f64,
}

pub fn barlow_bass_check(df: &ExponentFit, ds: &ExponentFit, beta: &ExponentFit) -> BarlowBass {
    let predicted = 2.0 * df.slope / ds.slope;
    let b = beta.slope;
    let rel = |e: f64, x: f64| if x != 0.0 { e / x } else { 0.0 };
    let pred_rel =
        (rel(df.std_error, df.slope).powi(2) + rel(ds.std_error, ds.slope).powi(2)).sqrt();
    let ratio = predicted / b;
    let std_error = ratio * (pred_rel.powi(2) + rel(beta.std_error, b).powi(2)).sqrt();
    BarlowBass {
        beta: b,
        predicted,
        relative_discrepancy: ((b - predicted) / b).abs(),
        std_error: std_error.abs(),
    }
}

/// Concentration of `|B(n)|` around `n^2` across replicas: the fraction
/// inside `[n^2 / lambda, lambda n^2]` for each `lambda`, with the constant
/// `C` of the bound `fraction >= 1 - C / lambda` fitted at one `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BallConcentration {
    pub n: usize,
    pub replicas: usize,
    pub fit_lambda: f64,
    pub c_hat: f64,
    pub lambdas: Vec<f64>,
    pub fractions: Vec<f64>,
    /// `1 - c_hat / lambda` per lambda.
    pub bounds: Vec<f64>,
}

impl BallConcentration {
    /// Every fraction meets its bound and fractions grow with `lambda`.
    pub fn holds(&self) -> bool {
        let bounded = self.fractions.iter().zip(&self.bounds).all(|(f, b)| f >= b);
        let mut order: Vec<usize> = (0..self.lambdas.len()).collect();
        order.sort_by(|&a, &b| self.lambdas[a].total_cmp(&self.lambdas[b]));
        bounded
            && order
                .windows(2)
                .all(|w| self.fractions[w[0]] <= self.fractions[w[1]])
    }
}

pub fn ball_concentration(
    ball_sizes: &[u64],
    n: usize,
    fit_lambda: f64,
    lambdas: &[f64],
) -> Result<BallConcentration> {
    if ball_sizes.is_empty() {
        return arg("no replicas");
    }
    if n == 0 {
        return arg("radius must be positive");
    }
    if fit_lambda <= 1.0 || lambdas.iter().any(|&l| l <= 1.0) {
        return arg("lambda must exceed 1");
    }
    let n2 = (n as f64).powi(2);
    let fraction = |l: f64| {
        let inside = ball_sizes
            .iter()
            .filter(|&&b| (b as f64) * l >= n2 && b as f64 <= l * n2)
            .count();
        inside as f64 / ball_sizes.len() as f64
    };
    let c_hat = fit_lambda * (1.0 - fraction(fit_lambda));
    Ok(BallConcentration {
        n,
        replicas: ball_sizes.len(),
        fit_lambda,
        c_hat,
        lambdas: lambdas.to_vec(),
        fractions: lambdas.iter().map(|&l| fraction(l)).collect(),
        bounds: lambdas.iter().map(|&l| 1.0 - c_hat / l).collect(),
    })
}
