//! Relative variance `sigma^2 / mu^2` with a seeded bootstrap error.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::seeding::split_seed;

use super::{Sample, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConfig {
    pub resamples: usize,
    pub seed: u64,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            resamples: 2000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeVariance {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// `variance / mean^2`.
    pub ratio: f64,
    /// Bootstrap standard error of the ratio.
    pub std_error: f64,
    pub n: usize,
}

/// Computes the relative variance of a sample and bootstraps the ratio's
/// standard error. Each resample derives its own RNG stream from
/// `(config.seed, resample index)`, so the result does not depend on
/// evaluation order.
pub fn relative_variance(
    sample: &Sample,
    config: &BootstrapConfig,
) -> Result<RelativeVariance, StatsError> {
    sample.require(2)?;
    let values = sample.values();
    let n = values.len();
    let ratio_of = |vals: &[f64]| -> f64 {
        let nf = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / nf;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (nf - 1.0);
        var / (mean * mean)
    };

    let mean = sample.mean();
    let variance = sample.variance();
    let ratio = variance / (mean * mean);

    let mut boot = Vec::with_capacity(config.resamples);
    let mut resample = vec![0.0; n];
    for r in 0..config.resamples {
        let mut rng = ChaCha8Rng::seed_from_u64(split_seed(config.seed, &[r as u64]));
        for slot in resample.iter_mut() {
            *slot = values[rng.random_range(0..n)];
        }
        boot.push(ratio_of(&resample));
    }
    let std_error = if boot.len() > 1 {
        let bm = boot.iter().sum::<f64>() / boot.len() as f64;
        (boot.iter().map(|b| (b - bm).powi(2)).sum::<f64>() / (boot.len() - 1) as f64).sqrt()
    } else {
        0.0
    };

    Ok(RelativeVariance {
        mean,
        variance,
        ratio,
        std_error,
        n,
    })
}
