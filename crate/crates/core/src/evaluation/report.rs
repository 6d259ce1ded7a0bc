//! Rendering of evaluation results as markdown, CSV or JSON.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::boxplot::BoxPlotSummary;
use super::similarity::SimilaritySummary;
use super::stats::{AggregateStats, ComparisonTable, GroupCounts, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Markdown,
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unsupported report format {0:?} (expected markdown, csv or json)")]
pub struct UnsupportedFormat(pub String);

impl FromStr for ReportFormat {
    type Err = UnsupportedFormat;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            _ => Err(UnsupportedFormat(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Report<'a> {
    Table(&'a ComparisonTable),
    Stats(&'a AggregateStats),
    BoxPlots(&'a [BoxPlotSummary]),
    Similarity(&'a SimilaritySummary),
}

/// Renders `report`; `format` is one of markdown, csv, json.
pub fn emit_report(report: Report<'_>, format: &str) -> Result<String, UnsupportedFormat> {
    Ok(render(report, format.parse()?))
}

pub fn render(report: Report<'_>, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => json(report),
        ReportFormat::Csv => csv_text(report),
        ReportFormat::Markdown => markdown(report),
    }
}

fn json(report: Report<'_>) -> String {
    let text = match report {
        Report::Table(t) => serde_json::to_string_pretty(t),
        Report::Stats(s) => serde_json::to_string_pretty(s),
        Report::BoxPlots(b) => serde_json::to_string_pretty(b),
        Report::Similarity(s) => serde_json::to_string_pretty(s),
    };
    text.expect("report types serialize") + "\n"
}

/// Two decimals, without a sign on zero.
fn dp2(x: f64) -> String {
    let s = format!("{x:.2}");
    if s == "-0.00" {
        "0.00".into()
    } else {
        s
    }
}

fn md_row(out: &mut String, cells: &[String]) {
    out.push('|');
    for c in cells {
        let _ = write!(out, " {c} |");
    }
    out.push('\n');
}

fn md_header(out: &mut String, names: &[&str]) {
    md_row(out, &names.iter().map(|s| s.to_string()).collect::<Vec<_>>());
    let rule: Vec<String> = names
        .iter()
        .enumerate()
        .map(|(i, _)| if i == 0 { "---".into() } else { "---:".into() })
        .collect();
    md_row(out, &rule);
}

fn md_counts(out: &mut String, counts: &[GroupCounts]) {
    out.push('\n');
    for c in counts {
        let _ = writeln!(
            out,
            "- {}: {} included, {} degenerate excluded, {} unanalyzable excluded",
            c.group, c.included, c.excluded_degenerate, c.excluded_unanalyzable
        );
    }
}

fn markdown(report: Report<'_>) -> String {
    let mut out = String::new();
    match report {
        Report::Table(t) => {
            let mut groups: Vec<&str> = Vec::new();
            if let Some(d) = &t.dataset {
                groups.push(d);
            }
            groups.extend([t.baseline.as_str(), t.candidate.as_str()]);
            let mut head = vec!["Metric".to_string()];
            for g in &groups {
                head.push(format!("{g} mean"));
                head.push(format!("{g} median"));
            }
            head.push(format!("% ({} vs. {})", t.baseline, t.candidate));
            md_header(&mut out, &head.iter().map(String::as_str).collect::<Vec<_>>());
            for row in &t.rows {
                let mut cells = vec![row.metric.label().to_string()];
                let cols: Vec<Option<&Summary>> = t
                    .dataset
                    .as_ref()
                    .map(|_| row.dataset.as_ref())
                    .into_iter()
                    .chain([Some(&row.baseline), Some(&row.candidate)])
                    .collect();
                for s in cols {
                    match s {
                        Some(s) => cells.extend([dp2(s.mean), dp2(s.median)]),
                        None => cells.extend(["n/a".to_string(), "n/a".to_string()]),
                    }
                }
                cells.push(row.percent_change.map_or_else(|| "n/a".into(), dp2));
                md_row(&mut out, &cells);
            }
            md_counts(&mut out, &t.exclusions);
        }
        Report::Stats(s) => {
            let _ = writeln!(out, "### {}\n", s.group);
            md_header(&mut out, &["Metric", "count", "mean", "median", "std", "min", "max"]);
            for m in &s.metrics {
                let v = &m.summary;
                let mut cells = vec![m.metric.label().to_string(), v.count.to_string()];
                cells.extend([v.mean, v.median, v.std, v.min, v.max].map(dp2));
                md_row(&mut out, &cells);
            }
            md_counts(&mut out, &[GroupCounts::from(s)]);
        }
        Report::BoxPlots(plots) => {
            md_header(
                &mut out,
                &["Group", "Metric", "count", "Q1", "median", "Q3", "whisker low", "whisker high", "outliers"],
            );
            for b in plots {
                let p = &b.plot;
                let mut cells = vec![b.group.clone(), b.metric.label().to_string(), p.count.to_string()];
                cells.extend([p.q1, p.median, p.q3, p.whisker_low, p.whisker_high].map(dp2));
                cells.push(format!("[{}]", p.outliers.iter().map(|&x| dp2(x)).collect::<Vec<_>>().join(", ")));
                md_row(&mut out, &cells);
            }
        }
        Report::Similarity(s) => {
            md_header(&mut out, &["Backend", "pairs", "P", "R", "F1", "F3"]);
            let ms = |v: &Summary| format!("{} ({})", dp2(v.mean), dp2(v.std));
            md_row(
                &mut out,
                &[
                    s.backend.clone(),
                    s.pairs.to_string(),
                    ms(&s.precision),
                    ms(&s.recall),
                    ms(&s.f1),
                    ms(&s.f3),
                ],
            );
        }
    }
    out
}

const STATS_COLUMNS: [&str; 8] = ["metric", "group", "count", "mean", "median", "std", "min", "max"];

fn stats_record(metric: &str, group: &str, s: &Summary) -> Vec<String> {
    let mut r = vec![metric.to_string(), group.to_string(), s.count.to_string()];
    r.extend([s.mean, s.median, s.std, s.min, s.max].map(|x| x.to_string()));
    r
}

fn csv_text(report: Report<'_>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut rows: Vec<Vec<String>> = Vec::new();
    match report {
        Report::Table(t) => {
            rows.push(STATS_COLUMNS.map(String::from).to_vec());
            for row in &t.rows {
                let label = row.metric.label();
                if let (Some(g), Some(s)) = (&t.dataset, &row.dataset) {
                    rows.push(stats_record(label, g, s));
                }
                rows.push(stats_record(label, &t.baseline, &row.baseline));
                rows.push(stats_record(label, &t.candidate, &row.candidate));
            }
        }
        Report::Stats(s) => {
            rows.push(STATS_COLUMNS.map(String::from).to_vec());
            for m in &s.metrics {
                rows.push(stats_record(m.metric.label(), &s.group, &m.summary));
            }
        }
        Report::BoxPlots(plots) => {
            rows.push(
                ["group", "metric", "count", "q1", "median", "q3", "whisker_low", "whisker_high", "outliers"]
                    .map(String::from)
                    .to_vec(),
            );
            for b in plots {
                let p = &b.plot;
                let mut r = vec![b.group.clone(), b.metric.label().to_string(), p.count.to_string()];
                r.extend([p.q1, p.median, p.q3, p.whisker_low, p.whisker_high].map(|x| x.to_string()));
                r.push(p.outliers.iter().map(f64::to_string).collect::<Vec<_>>().join(" "));
                rows.push(r);
            }
        }
        Report::Similarity(s) => {
            rows.push(STATS_COLUMNS.map(String::from).to_vec());
            for (name, v) in [("P", &s.precision), ("R", &s.recall), ("F1", &s.f1), ("F3", &s.f3)] {
                rows.push(stats_record(name, &s.backend, v));
            }
        }
    }
    for r in rows {
        w.write_record(&r).expect("writing to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv of utf-8 fields")
}
