//! Kolmogorov-Smirnov sup-distance between an empirical sample and a CDF.

/// Two-sided KS statistic `sup_t |F_n(t) - F(t)|`.
///
/// Both the left and right limits of the empirical step function are
/// compared at every sample point. An empty sample yields 0.
pub fn ks_statistic(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite sample values"));
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let upper = (i as f64 + 1.0) / n - f;
        let lower = f - i as f64 / n;
        d = d.max(upper).max(lower);
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::Exp;

    #[test]
    fn quantile_spaced_sample_has_small_ks() {
        // Points at the i/(n+1) quantiles of the fitted CDF track it within
        // 1/n plus the largest quantile gap.
        let n = 100usize;
        let rate = 2.0;
        let values: Vec<f64> = (1..=n)
            .map(|i| -(1.0 - i as f64 / (n as f64 + 1.0)).ln() / rate)
            .collect();
        let d = ks_statistic(&values, |t| 1.0 - (-rate * t).exp());
        assert!(d < 1.0 / n as f64 + 1.0 / (n as f64 + 1.0), "d = {d}");
    }

    #[test]
    fn point_mass_mismatch_is_one() {
        // A CDF that has already saturated below the single sample point.
        let d = ks_statistic(&[1.0], |t| if t < 0.5 { 0.0 } else { 1.0 });
        assert_eq!(d, 1.0);
    }

    #[test]
    fn empty_sample_is_zero() {
        assert_eq!(ks_statistic(&[], |_| 0.5), 0.0);
    }

    #[test]
    fn detects_left_deviation() {
        // All mass far to the right of the sample: F(x) = 0 at the points,
        // so the empirical function exceeds it by 1 at the top step.
        let d = ks_statistic(&[1.0, 2.0, 3.0], |_| 0.0);
        assert_eq!(d, 1.0);
    }

    #[test]
    fn self_drawn_samples_pass_kolmogorov_bound() {
        // At 99% confidence the asymptotic critical value is 1.63 / sqrt(n).
        let rate = 0.01;
        let dist = Exp::new(rate).unwrap();
        let n = 10_000usize;
        let mut failures = 0;
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let values: Vec<f64> = (0..n).map(|_| rng.sample(dist)).collect();
            let d = ks_statistic(&values, |t| if t <= 0.0 { 0.0 } else { 1.0 - (-rate * t).exp() });
            if d >= 1.63 / (n as f64).sqrt() {
                failures += 1;
            }
        }
        assert!(failures <= 3, "{failures}/100 exceeded the 99% bound");
    }
}
