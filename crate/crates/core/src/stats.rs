//! Small statistical helpers shared by the Monte Carlo and audit code.

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

/// Two-sided 99% normal quantile.
pub const Z_99: f64 = 2.575_829_303_548_901;

/// Running mean / variance (Welford).
#[derive(Debug, Clone, Copy, Default)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Unbiased sample variance; zero for fewer than two points.
    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    /// Standard error of the mean.
    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return f64::INFINITY;
        }
        (self.variance() / self.count as f64).sqrt()
    }
}

impl FromIterator<f64> for Moments {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut m = Moments::default();
        for x in iter {
            m.push(x);
        }
        m
    }
}

/// A Monte Carlo proportion with its 99% Wilson interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub successes: u64,
    pub trials: u64,
    pub estimate: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl Proportion {
    pub fn new(successes: u64, trials: u64) -> Self {
        assert!(trials > 0);
        let n = trials as f64;
        let p = successes as f64 / n;
        let z2 = Z_99 * Z_99;
        let denom = 1.0 + z2 / n;
        let center = (p + z2 / (2.0 * n)) / denom;
        let half = Z_99 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
        Proportion {
            successes,
            trials,
            estimate: p,
            stderr: (p * (1.0 - p) / n).sqrt(),
            ci_low: (center - half).max(0.0),
            ci_high: (center + half).min(1.0),
        }
    }
}

/// Per-test z threshold for a family of `tests` two-sided tests whose
/// family-wise error equals that of a single `sigmas`-sigma test.
pub fn bonferroni_z(sigmas: f64, tests: usize) -> f64 {
    if tests <= 1 {
        return sigmas;
    }
    let normal = Normal::standard();
    let alpha = 2.0 * normal.sf(sigmas);
    normal.inverse_cdf(1.0 - alpha / (2.0 * tests as f64))
}

/// Sum with a fixed blocked reduction order.
pub fn blocked_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    const BLOCK: usize = 1024;
    let mut blocks = Vec::new();
    let mut acc = 0.0;
    let mut k = 0;
    for v in values {
        acc += v;
        k += 1;
        if k == BLOCK {
            blocks.push(acc);
            acc = 0.0;
            k = 0;
        }
    }
    blocks.push(acc);
    pairwise(&blocks)
}

fn pairwise(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        n => pairwise(&xs[..n / 2]) + pairwise(&xs[n / 2..]),
    }
}
