//! Inverse Gaussian (Wald) density, CDF, and maximum-likelihood fit.
//!
//! Density: `p(t) = sqrt(lambda / (2 pi t^3)) exp(-lambda (t - mu)^2 / (2 mu^2 t))`
//! with mean `mu` and variance `mu^3 / lambda`. The MLE has closed form:
//! `mu_hat` is the sample mean and `lambda_hat = n / sum(1/t_i - 1/mu_hat)`.

use std::f64::consts::PI;

use super::{ks_statistic, DistributionFit, FittedParams, Sample, StatsError};

fn check_params(mu: f64, lambda: f64) -> Result<(), StatsError> {
    if !mu.is_finite() || mu <= 0.0 || !lambda.is_finite() || lambda <= 0.0 {
        return Err(StatsError::DomainError(format!(
            "inverse Gaussian requires mu > 0 and lambda > 0, got mu={mu}, lambda={lambda}"
        )));
    }
    Ok(())
}

/// Inverse Gaussian probability density at `t > 0`.
pub fn invgauss_pdf(t: f64, mu: f64, lambda: f64) -> Result<f64, StatsError> {
    check_params(mu, lambda)?;
    if !t.is_finite() || t <= 0.0 {
        return Err(StatsError::DomainError(format!("pdf requires t > 0, got {t}")));
    }
    let z = t - mu;
    Ok((lambda / (2.0 * PI * t * t * t)).sqrt() * (-lambda * z * z / (2.0 * mu * mu * t)).exp())
}

/// Standard normal CDF.
fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `ln(P(Z > x))` for x >= 0, stable far into the tail where `erfc`
/// underflows.
fn ln_normal_sf(x: f64) -> f64 {
    if x < 30.0 {
        (0.5 * libm::erfc(x / std::f64::consts::SQRT_2)).ln()
    } else {
        // Asymptotic expansion of Mills' ratio.
        let x2 = x * x;
        -0.5 * x2 - (x * (2.0 * PI).sqrt()).ln() + (1.0 - 1.0 / x2 + 3.0 / (x2 * x2)).ln()
    }
}

/// Inverse Gaussian CDF; 0 for `t <= 0`.
///
/// The second term `exp(2 lambda / mu) Phi(-b)` is evaluated in log space
/// so that large `lambda / mu` (sharply peaked fits) cannot overflow.
pub fn invgauss_cdf(t: f64, mu: f64, lambda: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let s = (lambda / t).sqrt();
    let a = s * (t / mu - 1.0);
    let b = s * (t / mu + 1.0);
    let term1 = normal_cdf(a);
    let log_term2 = 2.0 * lambda / mu + ln_normal_sf(b);
    let term2 = if log_term2 < -745.0 { 0.0 } else { log_term2.exp() };
    (term1 + term2).clamp(0.0, 1.0)
}

/// Closed-form maximum-likelihood fit of an inverse Gaussian.
///
/// Standard errors come from the observed information:
/// `se(mu) = sqrt(mu^3 / (n lambda))`, `se(lambda) = lambda sqrt(2 / n)`.
pub fn fit_invgauss(sample: &Sample) -> Result<DistributionFit, StatsError> {
    sample.require(3)?;
    if sample.all_equal() {
        return Err(StatsError::DegenerateSample);
    }
    let n = sample.len() as f64;
    let mu = sample.mean();
    let denom: f64 = sample.values().iter().map(|&t| 1.0 / t - 1.0 / mu).sum();
    if !denom.is_finite() || denom <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    let lambda = n / denom;
    let mu_err = (mu.powi(3) / (n * lambda)).sqrt();
    let lambda_err = lambda * (2.0 / n).sqrt();
    let ks = ks_statistic(sample.values(), |t| invgauss_cdf(t, mu, lambda));
    Ok(DistributionFit {
        params: FittedParams::InverseGaussian {
            mu,
            lambda,
            mu_err,
            lambda_err,
        },
        mean: mu,
        variance: mu.powi(3) / lambda,
        ks_statistic: ks,
        n: sample.len(),
        censored_count: sample.censored_count(),
    })
}
