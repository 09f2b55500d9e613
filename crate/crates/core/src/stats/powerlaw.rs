//! Power-law exponent estimation by (weighted) least squares in log-log
//! space: `y ~ N^(-theta)` becomes `ln y = a - theta ln N`.

use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawPoint {
    pub n: f64,
    pub y: f64,
    /// One-sigma uncertainty of `y`; fits are weighted by
    /// `(y / y_err)^2` when every point carries a positive error.
    pub y_err: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Exponent of the decay `y ~ N^(-theta)`.
    pub theta: f64,
    pub theta_err: f64,
    /// Intercept `a` of the log-log line.
    pub log_amplitude: f64,
    /// Log-space residuals, one per input point.
    pub residuals: Vec<f64>,
    pub weighted: bool,
}

/// Fits `ln y = a - theta ln N`.
///
/// When every point has a positive `y_err` the regression is weighted by
/// the inverse squared relative errors and `theta_err` comes from the
/// weight-based covariance; otherwise the fit is unweighted and the error
/// is residual-based.
pub fn fit_powerlaw(points: &[PowerLawPoint]) -> Result<PowerLawFit, StatsError> {
    if points.len() < 3 {
        return Err(StatsError::TooFewValues {
            needed: 3,
            got: points.len(),
        });
    }
    for p in points {
        let valid = p.n.is_finite() && p.y.is_finite() && p.n > 0.0 && p.y > 0.0;
        if !valid {
            return Err(StatsError::DomainError(format!(
                "power-law points need n > 0 and y > 0, got ({}, {})",
                p.n, p.y
            )));
        }
    }

    let weighted = points
        .iter()
        .all(|p| matches!(p.y_err, Some(e) if e.is_finite() && e > 0.0));
    let xs: Vec<f64> = points.iter().map(|p| p.n.ln()).collect();
    let zs: Vec<f64> = points.iter().map(|p| p.y.ln()).collect();
    let ws: Vec<f64> = if weighted {
        points
            .iter()
            .map(|p| {
                let rel = p.y_err.unwrap() / p.y;
                1.0 / (rel * rel)
            })
            .collect()
    } else {
        vec![1.0; points.len()]
    };

    let wsum: f64 = ws.iter().sum();
    let xbar = xs.iter().zip(&ws).map(|(x, w)| x * w).sum::<f64>() / wsum;
    let zbar = zs.iter().zip(&ws).map(|(z, w)| z * w).sum::<f64>() / wsum;
    let sxx: f64 = xs.iter().zip(&ws).map(|(x, w)| w * (x - xbar).powi(2)).sum();
    if sxx <= 0.0 {
        return Err(StatsError::DomainError(
            "all points share the same N; slope undefined".into(),
        ));
    }
    let sxz: f64 = xs
        .iter()
        .zip(&zs)
        .zip(&ws)
        .map(|((x, z), w)| w * (x - xbar) * (z - zbar))
        .sum();
    let slope = sxz / sxx;
    let intercept = zbar - slope * xbar;

    let residuals: Vec<f64> = xs
        .iter()
        .zip(&zs)
        .map(|(x, z)| z - (intercept + slope * x))
        .collect();

    let theta_err = if weighted {
        (1.0 / sxx).sqrt()
    } else {
        let dof = (points.len() - 2) as f64;
        let ssr: f64 = residuals.iter().map(|r| r * r).sum();
        if dof > 0.0 {
            (ssr / dof / sxx).sqrt()
        } else {
            0.0
        }
    };

    Ok(PowerLawFit {
        theta: -slope,
        theta_err,
        log_amplitude: intercept,
        residuals,
        weighted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Normal;

    fn bare(points: &[(f64, f64)]) -> Vec<PowerLawPoint> {
        points
            .iter()
            .map(|&(n, y)| PowerLawPoint { n, y, y_err: None })
            .collect()
    }

    #[test]
    fn exact_power_law_recovers_exponent_exactly() {
        let fit = fit_powerlaw(&bare(&[(10.0, 1.0), (100.0, 0.1), (1000.0, 0.01)])).unwrap();
        assert_relative_eq!(fit.theta, 1.0, max_relative = 1e-12);
        assert!(fit.residuals.iter().all(|r| r.abs() < 1e-12));
        assert!(fit.theta_err < 1e-12);
    }

    #[test]
    fn constant_y_gives_zero_theta() {
        let fit = fit_powerlaw(&bare(&[(10.0, 2.5), (100.0, 2.5), (1000.0, 2.5)])).unwrap();
        assert_relative_eq!(fit.theta, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn weighted_fit_uses_relative_errors() {
        let points = vec![
            PowerLawPoint { n: 10.0, y: 1.0, y_err: Some(0.05) },
            PowerLawPoint { n: 100.0, y: 0.1, y_err: Some(0.005) },
            PowerLawPoint { n: 1000.0, y: 0.01, y_err: Some(0.0005) },
        ];
        let fit = fit_powerlaw(&points).unwrap();
        assert!(fit.weighted);
        assert_relative_eq!(fit.theta, 1.0, max_relative = 1e-12);
        assert!(fit.theta_err > 0.0);
    }

    #[test]
    fn recovers_exponent_under_lognormal_noise() {
        // y = N^(-0.39) * exp(eps), eps ~ N(0, 0.05), over a dense grid.
        let theta_true = 0.39;
        let noise = Normal::new(0.0, 0.05).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let grid = [2500.0f64, 3500.0, 5000.0, 7000.0, 10_000.0, 14_000.0, 20_000.0];
        let points = bare(
            &grid
                .iter()
                .map(|&n| {
                    let eps: f64 = rng.sample(noise);
                    (n, n.powf(-theta_true) * eps.exp())
                })
                .collect::<Vec<_>>(),
        );
        let fit = fit_powerlaw(&points).unwrap();
        assert!(
            (fit.theta - theta_true).abs() < 3.0 * fit.theta_err,
            "theta {} +- {}",
            fit.theta,
            fit.theta_err
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            fit_powerlaw(&bare(&[(10.0, 1.0), (100.0, 0.1)])),
            Err(StatsError::TooFewValues { .. })
        ));
        assert!(matches!(
            fit_powerlaw(&bare(&[(10.0, 1.0), (100.0, -0.1), (1000.0, 0.01)])),
            Err(StatsError::DomainError(_))
        ));
        assert!(matches!(
            fit_powerlaw(&bare(&[(10.0, 1.0), (10.0, 0.5), (10.0, 0.1)])),
            Err(StatsError::DomainError(_))
        ));
    }
}
