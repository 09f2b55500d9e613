//! Grouped distribution fits and the self-averaging scaling report.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::table::ResultsTable;
use super::HarnessError;
use crate::stats::{
    fit_exponential, fit_invgauss, fit_powerlaw, fit_weibull, histogram, relative_variance,
    BinRule, BootstrapConfig, DistributionFit, PowerLawPoint, RelativeVariance, Sample,
    ScalingPoint, ScalingReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitFamily {
    InverseGaussian,
    Exponential,
    Weibull,
}

impl FitFamily {
    pub fn name(self) -> &'static str {
        match self {
            FitFamily::InverseGaussian => "inverse_gaussian",
            FitFamily::Exponential => "exponential",
            FitFamily::Weibull => "weibull",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub family: FitFamily,
    pub bootstrap: BootstrapConfig,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            family: FitFamily::InverseGaussian,
            bootstrap: BootstrapConfig::default(),
        }
    }
}

/// Per-size fit and relative variance over the solved runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupReport {
    pub n: u32,
    pub solved: usize,
    pub censored: usize,
    pub diverged: usize,
    pub relative_variance: Option<RelativeVariance>,
    pub fit: Option<DistributionFit>,
    /// Why the fit (or relative variance) is missing, when it is.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub family: String,
    pub groups: Vec<GroupReport>,
    pub scaling: Option<ScalingReport>,
    pub scaling_error: Option<String>,
}

/// Groups rows by problem size, fits the requested family to the solved
/// TTS of each group, computes relative variances, and fits the
/// power-law exponent across sizes.
pub fn analyze(table: &ResultsTable, options: &AnalysisOptions) -> Result<AnalysisReport, HarnessError> {
    if table.rows.is_empty() {
        return Err(HarnessError::InvalidSpec("results table is empty".into()));
    }
    let mut groups = Vec::new();
    for n in table.sizes() {
        let rows: Vec<_> = table.rows.iter().filter(|r| r.n == n).collect();
        let solved: Vec<f64> = rows
            .iter()
            .filter(|r| r.solved)
            .map(|r| r.tts as f64)
            .collect();
        let censored = rows.iter().filter(|r| r.censored).count();
        let diverged = rows.iter().filter(|r| r.diverged).count();
        let n_solved = solved.len();

        // TTS 0 means the initial guess already satisfied the formula;
        // positive-support fits cannot absorb those, so they are excluded
        // and surfaced in the group's error note.
        let positive: Vec<f64> = solved.iter().copied().filter(|t| *t > 0.0).collect();
        let dropped_zero = n_solved - positive.len();

        let mut error: Option<String> = None;
        if dropped_zero > 0 {
            error = Some(format!("{dropped_zero} zero-step runs excluded from fits"));
        }

        let (relvar, fit) = match Sample::new(positive, censored) {
            Ok(sample) => {
                let relvar = match relative_variance(&sample, &options.bootstrap) {
                    Ok(rv) => Some(rv),
                    Err(e) => {
                        error = Some(e.to_string());
                        None
                    }
                };
                let fit = match options.family {
                    FitFamily::InverseGaussian => fit_invgauss(&sample),
                    FitFamily::Exponential => fit_exponential(&sample),
                    FitFamily::Weibull => fit_weibull(&sample),
                };
                let fit = match fit {
                    Ok(f) => Some(f),
                    Err(e) => {
                        error = Some(e.to_string());
                        None
                    }
                };
                (relvar, fit)
            }
            Err(e) => {
                error = Some(e.to_string());
                (None, None)
            }
        };

        groups.push(GroupReport {
            n,
            solved: n_solved,
            censored,
            diverged,
            relative_variance: relvar,
            fit,
            error,
        });
    }

    let points: Vec<PowerLawPoint> = groups
        .iter()
        .filter_map(|g| {
            let rv = g.relative_variance.as_ref()?;
            if rv.ratio > 0.0 {
                Some(PowerLawPoint {
                    n: f64::from(g.n),
                    y: rv.ratio,
                    y_err: (rv.std_error > 0.0).then_some(rv.std_error),
                })
            } else {
                None
            }
        })
        .collect();

    let (scaling, scaling_error) = if points.len() >= 3 {
        match fit_powerlaw(&points) {
            Ok(fit) => {
                let scaling_points = groups
                    .iter()
                    .filter_map(|g| {
                        let rv = g.relative_variance.as_ref()?;
                        Some(ScalingPoint {
                            n: g.n,
                            mean: rv.mean,
                            variance: rv.variance,
                            relative_variance: rv.ratio,
                            relative_variance_err: rv.std_error,
                            solved: g.solved,
                            censored: g.censored,
                        })
                    })
                    .collect();
                (
                    Some(ScalingReport {
                        points: scaling_points,
                        theta: fit.theta,
                        theta_err: fit.theta_err,
                        fit_residuals: fit.residuals,
                    }),
                    None,
                )
            }
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (
            None,
            Some(format!(
                "power-law fit needs >= 3 sizes with positive relative variance, got {}",
                points.len()
            )),
        )
    };

    Ok(AnalysisReport {
        family: options.family.name().to_string(),
        groups,
        scaling,
        scaling_error,
    })
}

/// Persists an analysis under `out_dir`:
/// `analysis.json`, `fits/<family>_n<N>.json`, `plots/relative_variance.csv`,
/// and `plots/hist_n<N>.csv`.
pub fn write_analysis(
    report: &AnalysisReport,
    table: &ResultsTable,
    out_dir: &Path,
) -> Result<(), HarnessError> {
    let fits_dir = out_dir.join("fits");
    let plots_dir = out_dir.join("plots");
    fs::create_dir_all(&fits_dir)?;
    fs::create_dir_all(&plots_dir)?;

    fs::write(
        out_dir.join("analysis.json"),
        serde_json::to_string_pretty(report)?,
    )?;

    for group in &report.groups {
        if let Some(fit) = &group.fit {
            fs::write(
                fits_dir.join(format!("{}_n{}.json", report.family, group.n)),
                serde_json::to_string_pretty(fit)?,
            )?;
        }
        let solved: Vec<f64> = table
            .rows
            .iter()
            .filter(|r| r.n == group.n && r.solved && r.tts > 0)
            .map(|r| r.tts as f64)
            .collect();
        if !solved.is_empty() {
            if let Ok(h) = histogram(&solved, &BinRule::FreedmanDiaconis) {
                fs::write(plots_dir.join(format!("hist_n{}.csv", group.n)), h.to_csv())?;
            }
        }
    }

    let mut relvar_csv = String::from("n,mean,variance,relative_variance,std_error,solved,censored\n");
    for g in &report.groups {
        if let Some(rv) = &g.relative_variance {
            relvar_csv.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                g.n, rv.mean, rv.variance, rv.ratio, rv.std_error, g.solved, g.censored
            ));
        }
    }
    fs::write(plots_dir.join("relative_variance.csv"), relvar_csv)?;
    Ok(())
}
