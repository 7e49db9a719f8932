pub mod bt;
pub mod fit;
pub mod iic;
pub mod perc;
pub mod walk;

use crate::error::{config, CliResult};

/// `a:b` with `a < b`.
pub fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("window `{s}` is not of the form a:b"))?;
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number `{t}` in window `{s}`"))
    };
    let (a, b) = (num(a)?, num(b)?);
    if !(a < b) {
        return Err(format!("window `{s}` is empty"));
    }
    Ok((a, b))
}

/// `start:step:stop`, inclusive of `stop` up to rounding.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, h, b] = parts.as_slice() else {
        return Err(format!("grid `{s}` is not of the form start:step:stop"));
    };
    let num = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| format!("bad number `{t}` in grid `{s}`"))
    };
    let (a, h, b) = (num(a)?, num(h)?, num(b)?);
    if !(h > 0.0) || !(a <= b) {
        return Err(format!("grid `{s}` needs step > 0 and start <= stop"));
    }
    let steps = ((b - a) / h + 1e-9).floor() as usize;
    if steps > 100_000 {
        return Err(format!("grid `{s}` has too many points"));
    }
    Ok((0..=steps)
        .map(|i| ((a + i as f64 * h) * 1e9).round() / 1e9)
        .collect())
}

/// Comma-separated list, or `lo:hi:count` for `count` log-spaced integers.
pub fn parse_k_grid(s: &str) -> Result<Vec<u64>, String> {
    if let [lo, hi, count] = s.split(':').collect::<Vec<_>>().as_slice() {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad number `{t}` in grid `{s}`"))
        };
        let (lo, hi, count) = (num(lo)?, num(hi)?, num(count)?);
        if lo == 0 || lo >= hi || count < 2 {
            return Err(format!("grid `{s}` needs 0 < lo < hi and count >= 2"));
        }
        let ratio = (hi as f64 / lo as f64).ln() / (count - 1) as f64;
        let mut k: Vec<u64> = (0..count)
            .map(|i| (lo as f64 * (ratio * i as f64).exp()).round() as u64)
            .collect();
        k.dedup();
        return Ok(k);
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad number `{t}` in grid `{s}`"))
        })
        .collect()
}

pub fn require_positive(name: &str, v: usize) -> CliResult<()> {
    if v == 0 {
        return config(format!("--{name} must be positive"));
    }
    Ok(())
}
