use serde::{Deserialize, Serialize};

/// Monte-Carlo mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateCI {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: usize,
    /// Set when censored samples make the estimate unreliable.
    #[serde(default)]
    pub flagged: bool,
}

impl EstimateCI {
    pub fn exact(value: f64) -> Self {
        EstimateCI {
            mean: value,
            std_error: 0.0,
            n_samples: 1,
            flagged: false,
        }
    }

    /// `|self - value|` measured in standard errors (infinite when the
    /// error is zero and the values differ).
    pub fn z_score(&self, value: f64) -> f64 {
        let diff = (self.mean - value).abs();
        if diff == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            f64::INFINITY
        } else {
            diff / self.std_error
        }
    }
}

/// Streaming mean/variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct Accumulator {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Accumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    /// Chan et al. parallel merge.
    pub fn merge(&mut self, other: &Accumulator) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        self.mean += delta * other.n as f64 / n as f64;
        self.m2 += other.m2 + delta * delta * (self.n as f64 * other.n as f64) / n as f64;
        self.n = n;
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            (self.variance() / self.n as f64).sqrt()
        }
    }

    pub fn estimate(&self) -> EstimateCI {
        EstimateCI {
            mean: self.mean,
            std_error: self.std_error(),
            n_samples: self.n.max(1),
            flagged: false,
        }
    }
}

impl FromIterator<f64> for Accumulator {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Accumulator::new();
        for x in iter {
            acc.push(x);
        }
        acc
    }
}

/// Binomial proportion with standard error `sqrt(p(1-p)/n)`.
pub fn proportion(successes: usize, n: usize) -> EstimateCI {
    let p = successes as f64 / n as f64;
    EstimateCI {
        mean: p,
        std_error: (p * (1.0 - p) / n as f64).sqrt(),
        n_samples: n,
        flagged: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn welford_matches_two_pass() {
        let xs = [1.0, 4.0, 9.0, 16.0, 25.0, 2.5];
        let acc: Accumulator = xs.iter().copied().collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        assert!((acc.mean() - mean).abs() < 1e-12);
        assert!((acc.variance() - var).abs() < 1e-12);

        let mut left: Accumulator = xs[..2].iter().copied().collect();
        let right: Accumulator = xs[2..].iter().copied().collect();
        left.merge(&right);
        assert!((left.variance() - var).abs() < 1e-12);
    }

    #[test]
    fn z_score_edge_cases() {
        assert_eq!(EstimateCI::exact(3.0).z_score(3.0), 0.0);
        assert!(EstimateCI::exact(3.0).z_score(2.0).is_infinite());
    }
}
