//! Histogram binning for TTS plot data.

use serde::{Deserialize, Serialize};

use super::StatsError;

/// Binning rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinRule {
    /// Bin width `2 IQR / n^(1/3)` spanning the sample range.
    FreedmanDiaconis,
    /// Fixed-width bins starting at `origin`.
    FixedWidth { width: f64, origin: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `counts.len() + 1` monotone edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// CSV serialization: `bin_left,bin_right,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("bin_left,bin_right,count\n");
        for (i, count) in self.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", self.edges[i], self.edges[i + 1], count));
        }
        out
    }
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
    }
}

pub fn histogram(values: &[f64], rule: &BinRule) -> Result<Histogram, StatsError> {
    if values.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut sorted = values.to_vec();
    sorted.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite sample values"));
    let min = sorted[0];
    let max = *sorted.last().unwrap();

    let (origin, width, bins) = match rule {
        BinRule::FixedWidth { width, origin } => {
            if width.is_nan() || *width <= 0.0 {
                return Err(StatsError::DomainError(format!(
                    "bin width must be > 0, got {width}"
                )));
            }
            if min < *origin {
                return Err(StatsError::DomainError(format!(
                    "value {min} lies below the bin origin {origin}"
                )));
            }
            let bins = (((max - origin) / width).floor() as usize + 1).max(1);
            (*origin, *width, bins)
        }
        BinRule::FreedmanDiaconis => {
            let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
            let width = 2.0 * iqr / (values.len() as f64).cbrt();
            if width <= 0.0 || max == min {
                // Degenerate spread: a single bin covering everything.
                let pad = if max == min { 0.5 } else { 0.0 };
                (min - pad, (max - min) + 2.0 * pad, 1)
            } else {
                let bins = (((max - min) / width).ceil() as usize).max(1);
                (min, width, bins)
            }
        }
    };

    let mut counts = vec![0u64; bins];
    for &v in values {
        let mut idx = ((v - origin) / width).floor() as usize;
        if idx >= bins {
            // Top edge is inclusive so the maximum lands in the last bin.
            idx = bins - 1;
        }
        counts[idx] += 1;
    }
    let edges = (0..=bins).map(|i| origin + i as f64 * width).collect();
    Ok(Histogram { edges, counts })
}
