//! Exponential maximum-likelihood fit: `lambda_hat = 1 / mean`.
//!
//! The implied relative variance is identically 1, which is what makes
//! the exponential the reference point for non-self-averaging TTS.

use super::{ks_statistic, DistributionFit, FittedParams, Sample, StatsError};

pub fn fit_exponential(sample: &Sample) -> Result<DistributionFit, StatsError> {
    sample.require(2)?;
    let n = sample.len() as f64;
    let mean = sample.mean();
    let lambda = 1.0 / mean;
    let lambda_err = lambda / n.sqrt();
    let ks = ks_statistic(sample.values(), |t| {
        if t <= 0.0 {
            0.0
        } else {
            -(-lambda * t).exp_m1()
        }
    });
    Ok(DistributionFit {
        params: FittedParams::Exponential { lambda, lambda_err },
        mean,
        variance: mean * mean,
        ks_statistic: ks,
        n: sample.len(),
        censored_count: sample.censored_count(),
    })
}
