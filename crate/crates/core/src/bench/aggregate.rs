use super::runner::RunReport;
use crate::validity::MetricBundle;
use crate::{Error, Result};

/// Per-metric mean, min and max of one algorithm's runs.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub algorithm: String,
    pub runs: usize,
    pub mean: MetricBundle,
    pub min: MetricBundle,
    pub max: MetricBundle,
    /// Lowest run index attaining the minimum / maximum error rate.
    pub err_min_run: usize,
    pub err_max_run: usize,
}

/// Summaries in algorithm order.
#[derive(Debug, Clone, PartialEq)]
pub struct Aggregate {
    pub groups: Vec<AlgorithmSummary>,
}

/// Mean written as `min + Σ(x − min)/n` and clamped into `[min, max]`, so
/// equal inputs give exactly that value and `min ≤ mean ≤ max` always holds.
fn stats(xs: &[f64]) -> (f64, f64, f64) {
    let min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return (min, min, max);
    }
    let mean = min + xs.iter().map(|x| x - min).sum::<f64>() / xs.len() as f64;
    (mean.clamp(min, max), min, max)
}

/// Groups reports by algorithm (assumed sorted by algorithm, then run).
pub fn aggregate(reports: &[RunReport]) -> Result<Aggregate> {
    if reports.is_empty() {
        return Err(Error::InvalidParams("cannot aggregate zero reports".into()));
    }
    let mut groups = Vec::new();
    for chunk in reports.chunk_by(|a, b| a.algorithm == b.algorithm) {
        let cols: Vec<Vec<f64>> = (0..7)
            .map(|c| chunk.iter().map(|r| r.metrics.values()[c]).collect())
            .collect();
        let mut mean = [0.0; 7];
        let mut min = [0.0; 7];
        let mut max = [0.0; 7];
        for c in 0..7 {
            (mean[c], min[c], max[c]) = stats(&cols[c]);
        }
        let arg = |target: f64| {
            chunk
                .iter()
                .filter(|r| r.metrics.err == target)
                .map(|r| r.run)
                .min()
                .unwrap_or(0)
        };
        groups.push(AlgorithmSummary {
            algorithm: chunk[0].algorithm.name().to_string(),
            runs: chunk.len(),
            mean: MetricBundle::from_values(mean),
            min: MetricBundle::from_values(min),
            max: MetricBundle::from_values(max),
            err_min_run: arg(min[6]),
            err_max_run: arg(max[6]),
        });
    }
    Ok(Aggregate { groups })
}
