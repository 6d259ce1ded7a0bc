use serde::{Deserialize, Serialize};

use super::EmptyCorpus;
use crate::metrics::{percent_change, MaintainabilityReport, Metric};

/// Count, centre and spread of one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single value.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

pub(crate) fn sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

pub fn summarize(values: &[f64]) -> Result<Summary, EmptyCorpus> {
    if values.is_empty() {
        return Err(EmptyCorpus);
    }
    let v = sorted(values);
    let n = v.len();
    let (min, max) = (v[0], v[n - 1]);
    if min == max {
        return Ok(Summary {
            count: n,
            mean: min,
            median: min,
            std: 0.0,
            min,
            max,
        });
    }
    let mean = (v.iter().sum::<f64>() / n as f64).clamp(min, max);
    let median = if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    };
    let std = if n > 1 {
        (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Summary {
        count: n,
        mean,
        median,
        std,
        min,
        max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStats {
    pub metric: Metric,
    #[serde(flatten)]
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateStats {
    pub group: String,
    /// Reports that entered the statistics.
    pub included: usize,
    pub excluded_degenerate: usize,
    pub excluded_unanalyzable: usize,
    pub metrics: Vec<MetricStats>,
}

impl AggregateStats {
    pub fn get(&self, metric: Metric) -> Option<&Summary> {
        self.metrics.iter().find(|m| m.metric == metric).map(|m| &m.summary)
    }
}

/// Per-metric statistics over a group. `None` entries stand for snippets
/// that could not be analyzed; they and degenerate reports are counted
/// but left out of the statistics.
pub fn corpus_stats<'a>(
    group: &str,
    reports: impl IntoIterator<Item = Option<&'a MaintainabilityReport>>,
) -> Result<AggregateStats, EmptyCorpus> {
    let mut included = Vec::new();
    let (mut degenerate, mut unanalyzable) = (0, 0);
    for r in reports {
        match r {
            None => unanalyzable += 1,
            Some(r) if r.degenerate => degenerate += 1,
            Some(r) => included.push(r),
        }
    }
    let metrics = Metric::ALL
        .iter()
        .map(|&metric| {
            let values: Vec<f64> = included.iter().map(|r| r.value(metric)).collect();
            summarize(&values).map(|summary| MetricStats { metric, summary })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(AggregateStats {
        group: group.to_string(),
        included: included.len(),
        excluded_degenerate: degenerate,
        excluded_unanalyzable: unanalyzable,
        metrics,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub metric: Metric,
    pub dataset: Option<Summary>,
    pub baseline: Summary,
    pub candidate: Summary,
    /// Change of the candidate mean relative to the baseline mean; `None`
    /// when the candidate mean is zero.
    pub percent_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTable {
    pub dataset: Option<String>,
    pub baseline: String,
    pub candidate: String,
    pub rows: Vec<ComparisonRow>,
    /// (group, included, degenerate, unanalyzable) in column order.
    pub exclusions: Vec<GroupCounts>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupCounts {
    pub group: String,
    pub included: usize,
    pub excluded_degenerate: usize,
    pub excluded_unanalyzable: usize,
}

impl From<&AggregateStats> for GroupCounts {
    fn from(s: &AggregateStats) -> Self {
        GroupCounts {
            group: s.group.clone(),
            included: s.included,
            excluded_degenerate: s.excluded_degenerate,
            excluded_unanalyzable: s.excluded_unanalyzable,
        }
    }
}

/// Lines up the groups metric by metric. Only metrics present in both
/// baseline and candidate become rows.
pub fn compare(dataset: Option<&AggregateStats>, baseline: &AggregateStats, candidate: &AggregateStats) -> ComparisonTable {
    let rows = Metric::ALL
        .iter()
        .filter_map(|&metric| {
            let (b, c) = (baseline.get(metric)?, candidate.get(metric)?);
            Some(ComparisonRow {
                metric,
                dataset: dataset.and_then(|d| d.get(metric)).copied(),
                baseline: *b,
                candidate: *c,
                percent_change: percent_change(b.mean, c.mean).ok(),
            })
        })
        .collect();
    ComparisonTable {
        dataset: dataset.map(|d| d.group.clone()),
        baseline: baseline.group.clone(),
        candidate: candidate.group.clone(),
        rows,
        exclusions: dataset.into_iter().chain([baseline, candidate]).map(GroupCounts::from).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        let s = summarize(&[80.0, 90.0, 100.0]).unwrap();
        assert_eq!((s.mean, s.median, s.std), (90.0, 90.0, 10.0));
        let one = summarize(&[3.5]).unwrap();
        assert_eq!((one.mean, one.median, one.std), (3.5, 3.5, 0.0));
        assert_eq!(summarize(&[]), Err(EmptyCorpus));
        assert_eq!(summarize(&[4.0, 1.0, 3.0, 2.0]).unwrap().median, 2.5);
    }

    #[test]
    fn equal_values_have_no_spread() {
        let s = summarize(&[0.1; 7]).unwrap();
        assert_eq!((s.mean, s.std), (0.1, 0.0));
    }
}
