//! Weibull maximum-likelihood fit via the shape profile equation.
//!
//! With `w_i = (t_i / scale)^shape`, setting the scale score to zero gives
//! `scale = (sum t_i^k / n)^(1/k)`, and the remaining equation for the
//! shape `k` is
//!
//! ```text
//! g(k) = sum(t_i^k ln t_i) / sum(t_i^k) - 1/k - mean(ln t_i) = 0
//! ```
//!
//! `g` is strictly increasing, so a bracketed bisection on k in
//! [0.05, 50] converges unconditionally; values are rescaled by the
//! sample maximum to keep `t^k` finite for heavy shapes.

use libm::tgamma;

use super::{ks_statistic, DistributionFit, FittedParams, Sample, StatsError};

const SHAPE_BRACKET: (f64, f64) = (0.05, 50.0);
const REL_TOL: f64 = 1e-9;
const MAX_ITER: usize = 200;

pub fn fit_weibull(sample: &Sample) -> Result<DistributionFit, StatsError> {
    sample.require(3)?;
    if sample.all_equal() {
        return Err(StatsError::DegenerateSample);
    }

    // Work on s_i = t_i / t_max; the scale factor cancels from g(k).
    let t_max = sample.values().iter().cloned().fold(0.0, f64::max);
    let scaled: Vec<f64> = sample.values().iter().map(|&t| t / t_max).collect();
    let ln_scaled: Vec<f64> = scaled.iter().map(|s| s.ln()).collect();
    let mean_ln: f64 = ln_scaled.iter().sum::<f64>() / scaled.len() as f64;

    let profile = |k: f64| -> f64 {
        let mut s0 = 0.0;
        let mut s1 = 0.0;
        for (s, ln_s) in scaled.iter().zip(&ln_scaled) {
            let w = s.powf(k);
            s0 += w;
            s1 += w * ln_s;
        }
        s1 / s0 - 1.0 / k - mean_ln
    };

    let (mut lo, mut hi) = SHAPE_BRACKET;
    let (g_lo, g_hi) = (profile(lo), profile(hi));
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(StatsError::NonConvergence(format!(
            "shape root not bracketed in [{lo}, {hi}]: g = ({g_lo}, {g_hi})"
        )));
    }
    let mut k = 0.5 * (lo + hi);
    let mut converged = false;
    for _ in 0..MAX_ITER {
        k = 0.5 * (lo + hi);
        let g = profile(k);
        if g < 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        if hi - lo <= REL_TOL * k {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(StatsError::NonConvergence(format!(
            "bisection did not reach relative tolerance {REL_TOL}"
        )));
    }

    let n = sample.len() as f64;
    let scale = t_max * (scaled.iter().map(|s| s.powf(k)).sum::<f64>() / n).powf(1.0 / k);

    // Observed information at the MLE, with w_i = (t_i/scale)^k and
    // u_i = ln(t_i/scale):
    //   J_kk = n/k^2 + sum(w u^2)
    //   J_kl = n/l - k/l sum(w u) - 1/l sum(w)
    //   J_ll = k/l^2 (sum(w) - n) + k^2/l^2 sum(w)
    let mut sw = 0.0;
    let mut swu = 0.0;
    let mut swu2 = 0.0;
    for &t in sample.values() {
        let u = (t / scale).ln();
        let w = (t / scale).powf(k);
        sw += w;
        swu += w * u;
        swu2 += w * u * u;
    }
    let j_kk = n / (k * k) + swu2;
    let j_kl = n / scale - (k / scale) * swu - sw / scale;
    let j_ll = (k / (scale * scale)) * (sw - n) + (k * k / (scale * scale)) * sw;
    let det = j_kk * j_ll - j_kl * j_kl;
    let (shape_err, scale_err) = if det > 0.0 {
        ((j_ll / det).sqrt(), (j_kk / det).sqrt())
    } else {
        (f64::NAN, f64::NAN)
    };

    // Implied moments: mean = scale Gamma(1 + 1/k),
    // variance = scale^2 [Gamma(1 + 2/k) - Gamma(1 + 1/k)^2].
    let g1 = tgamma(1.0 + 1.0 / k);
    let g2 = tgamma(1.0 + 2.0 / k);
    let mean = scale * g1;
    let variance = scale * scale * (g2 - g1 * g1);

    let ks = ks_statistic(sample.values(), |t| {
        if t <= 0.0 {
            0.0
        } else {
            -(-(t / scale).powf(k)).exp_m1()
        }
    });

    Ok(DistributionFit {
        params: FittedParams::Weibull {
            shape: k,
            scale,
            shape_err,
            scale_err,
        },
        mean,
        variance,
        ks_statistic: ks,
        n: sample.len(),
        censored_count: sample.censored_count(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Weibull;

    fn draw(shape: f64, scale: f64, n: usize, seed: u64) -> Sample {
        let dist = Weibull::new(scale, shape).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // Resample the rare exact zero; Weibull support is t > 0.
        let values: Vec<f64> = (0..n)
            .map(|_| loop {
                let x: f64 = rng.sample(dist);
                if x > 0.0 {
                    break x;
                }
            })
            .collect();
        Sample::new(values, 0).unwrap()
    }

    #[test]
    fn unit_shape_reduces_to_exponential() {
        let sample = draw(1.0, 50.0, 100_000, 5);
        let fit = fit_weibull(&sample).unwrap();
        let FittedParams::Weibull { shape, shape_err, .. } = fit.params else {
            panic!();
        };
        assert!(
            (shape - 1.0).abs() < 3.0 * shape_err,
            "shape {shape} +- {shape_err}"
        );
    }

    #[test]
    fn heavy_tail_recovery() {
        // Shape below 1 mirrors the heavy-tailed CDCL timing fits.
        let (shape, scale) = (0.7, 100.0);
        let sample = draw(shape, scale, 100_000, 6);
        let fit = fit_weibull(&sample).unwrap();
        let FittedParams::Weibull {
            shape: k,
            scale: l,
            shape_err,
            scale_err,
        } = fit.params
        else {
            panic!();
        };
        assert!((k - shape).abs() < 3.0 * shape_err, "shape {k} +- {shape_err}");
        assert!((l - scale).abs() < 3.0 * scale_err, "scale {l} +- {scale_err}");
        assert!(fit.ks_statistic < 1.63 / (fit.n as f64).sqrt());
    }

    #[test]
    fn degenerate_sample_rejected() {
        let sample = Sample::new(vec![5.0, 5.0, 5.0], 0).unwrap();
        assert_eq!(fit_weibull(&sample), Err(StatsError::DegenerateSample));
    }

    #[test]
    fn implied_moments_match_sample_for_large_draws() {
        let sample = draw(2.0, 30.0, 200_000, 7);
        let fit = fit_weibull(&sample).unwrap();
        assert!((fit.mean - sample.mean()).abs() / sample.mean() < 0.01);
        assert!((fit.variance - sample.variance()).abs() / sample.variance() < 0.05);
    }

    #[test]
    fn survives_large_magnitude_values() {
        // 1e5-second outliers must not overflow t^k during bracketing.
        let values = vec![120_000.0, 80_000.0, 30.0, 2.0, 0.5, 14_000.0, 900.0, 45.0];
        let fit = fit_weibull(&Sample::new(values, 0).unwrap()).unwrap();
        let FittedParams::Weibull { shape, scale, .. } = fit.params else {
            panic!();
        };
        assert!(shape.is_finite() && shape > 0.0);
        assert!(scale.is_finite() && scale > 0.0);
        assert!(shape < 1.0, "scattered magnitudes imply a heavy tail");
    }
}
