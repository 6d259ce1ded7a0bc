use serde::{Deserialize, Serialize};

use super::stats::sorted;
use super::EmptyCorpus;
use crate::metrics::{MaintainabilityReport, Metric};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPlot {
    pub count: usize,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    /// Points beyond 1.5 IQR from the box, ascending.
    pub outliers: Vec<f64>,
}

/// Quantile of sorted data by linear interpolation between order
/// statistics at position `(n - 1) * p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

pub fn distribution(values: &[f64]) -> Result<BoxPlot, EmptyCorpus> {
    if values.is_empty() {
        return Err(EmptyCorpus);
    }
    let v = sorted(values);
    let (q1, median, q3) = (quantile(&v, 0.25), quantile(&v, 0.5), quantile(&v, 0.75));
    let iqr = q3 - q1;
    let (fence_low, fence_high) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
    let inside = |x: &&f64| (fence_low..=fence_high).contains(*x);
    // the quartiles always lie inside the fences, so some datum does too
    let whisker_low = *v.iter().find(inside).unwrap_or(&v[0]);
    let whisker_high = *v.iter().rev().find(inside).unwrap_or(&v[v.len() - 1]);
    let outliers = v.iter().copied().filter(|x| !inside(&x)).collect();
    Ok(BoxPlot {
        count: v.len(),
        q1,
        median,
        q3,
        whisker_low,
        whisker_high,
        outliers,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPlotSummary {
    pub group: String,
    pub metric: Metric,
    #[serde(flatten)]
    pub plot: BoxPlot,
}

/// One box plot per metric over the analyzable, non-degenerate reports.
pub fn group_distributions<'a>(
    group: &str,
    reports: impl IntoIterator<Item = Option<&'a MaintainabilityReport>>,
) -> Result<Vec<BoxPlotSummary>, EmptyCorpus> {
    let kept: Vec<&MaintainabilityReport> = reports.into_iter().flatten().filter(|r| !r.degenerate).collect();
    Metric::ALL
        .iter()
        .map(|&metric| {
            let values: Vec<f64> = kept.iter().map(|r| r.value(metric)).collect();
            Ok(BoxPlotSummary {
                group: group.to_string(),
                metric,
                plot: distribution(&values)?,
            })
        })
        .collect()
}
