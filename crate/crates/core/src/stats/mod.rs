//! Distribution fitting and scaling statistics for TTS samples.
//!
//! All fits are maximum likelihood on the uncensored values; censored
//! runs are carried through as a count and never enter the likelihood.
//! Goodness of fit is screened with the Kolmogorov-Smirnov sup-distance
//! against the fitted law.

mod exponential;
mod histogram;
mod invgauss;
mod ks;
mod powerlaw;
mod relvar;
mod weibull;

pub use exponential::fit_exponential;
pub use histogram::{histogram, BinRule, Histogram};
pub use invgauss::{fit_invgauss, invgauss_cdf, invgauss_pdf};
pub use ks::ks_statistic;
pub use powerlaw::{fit_powerlaw, PowerLawFit, PowerLawPoint};
pub use relvar::{relative_variance, BootstrapConfig, RelativeVariance};
pub use weibull::fit_weibull;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("need at least {needed} values, got {got}")]
    TooFewValues { needed: usize, got: usize },
    #[error("degenerate sample (all values equal)")]
    DegenerateSample,
    #[error("domain error: {0}")]
    DomainError(String),
    #[error("fit did not converge: {0}")]
    NonConvergence(String),
}

/// A positive-valued TTS sample plus the number of censored runs that were
/// excluded from it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    values: Vec<f64>,
    censored_count: usize,
}

impl Sample {
    /// Validates that every value is finite and strictly positive.
    pub fn new(values: Vec<f64>, censored_count: usize) -> Result<Self, StatsError> {
        for &v in &values {
            if !v.is_finite() || v <= 0.0 {
                return Err(StatsError::DomainError(format!(
                    "sample values must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self {
            values,
            censored_count,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn censored_count(&self) -> usize {
        self.censored_count
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Unbiased sample variance (n - 1 denominator).
    pub fn variance(&self) -> f64 {
        let n = self.values.len() as f64;
        let mean = self.mean();
        self.values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }

    pub(crate) fn require(&self, needed: usize) -> Result<(), StatsError> {
        if self.len() < needed {
            return Err(StatsError::TooFewValues {
                needed,
                got: self.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn all_equal(&self) -> bool {
        self.values
            .windows(2)
            .all(|w| w[0].to_bits() == w[1].to_bits())
    }
}

/// Fitted family with maximum-likelihood parameters and their standard
/// errors from the observed information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FittedParams {
    InverseGaussian {
        mu: f64,
        lambda: f64,
        mu_err: f64,
        lambda_err: f64,
    },
    Exponential {
        lambda: f64,
        lambda_err: f64,
    },
    Weibull {
        shape: f64,
        scale: f64,
        shape_err: f64,
        scale_err: f64,
    },
}

/// A completed distribution fit: parameters, implied moments, and the KS
/// statistic of the data against the fitted law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionFit {
    #[serde(flatten)]
    pub params: FittedParams,
    pub mean: f64,
    pub variance: f64,
    pub ks_statistic: f64,
    pub n: usize,
    pub censored_count: usize,
}

impl DistributionFit {
    /// CDF of the fitted law at `t`.
    pub fn cdf(&self, t: f64) -> f64 {
        match self.params {
            FittedParams::InverseGaussian { mu, lambda, .. } => invgauss_cdf(t, mu, lambda),
            FittedParams::Exponential { lambda, .. } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-lambda * t).exp_m1()
                }
            }
            FittedParams::Weibull { shape, scale, .. } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-(t / scale).powf(shape)).exp_m1()
                }
            }
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self.params {
            FittedParams::InverseGaussian { .. } => "inverse_gaussian",
            FittedParams::Exponential { .. } => "exponential",
            FittedParams::Weibull { .. } => "weibull",
        }
    }
}

/// Per-size relative variance and the fitted self-averaging exponent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingReport {
    pub points: Vec<ScalingPoint>,
    /// Exponent of `sigma^2/mu^2 ~ N^(-theta)`.
    pub theta: f64,
    pub theta_err: f64,
    /// Log-space residuals of the power-law fit, one per point.
    pub fit_residuals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingPoint {
    pub n: u32,
    pub mean: f64,
    pub variance: f64,
    pub relative_variance: f64,
    pub relative_variance_err: f64,
    pub solved: usize,
    pub censored: usize,
}
