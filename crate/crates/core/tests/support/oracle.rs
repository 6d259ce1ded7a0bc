//! Frozen reference values for the snippet corpus (see
//! fixtures/oracle/generate.py) and the comparison against them.

#![allow(dead_code)]

use maintkit::metrics::snippet_report;
use maintkit::source::{analyze, SourceUnit};
use serde::Deserialize;

#[derive(Deserialize)]
pub struct Corpus {
    pub cases: Vec<Case>,
}

#[derive(Deserialize)]
pub struct Case {
    pub id: String,
    pub source: String,
    expected: Expected,
}

#[derive(Deserialize)]
#[allow(non_snake_case)]
struct Expected {
    loc: usize,
    lloc: usize,
    sloc: usize,
    comments: usize,
    multi: usize,
    blank: usize,
    single_comments: usize,
    h1: usize,
    h2: usize,
    N1: usize,
    N2: usize,
    volume: f64,
    effort: f64,
    total_complexity: u32,
    blocks: Vec<ExpectedBlock>,
    snippet_cc: f64,
    mi: f64,
}

#[derive(Deserialize, Debug, PartialEq)]
struct ExpectedBlock {
    name: String,
    line: u32,
    complexity: u32,
}

pub fn corpus() -> Corpus {
    let text = include_str!("../fixtures/oracle/snippets.json");
    serde_json::from_str(text).expect("oracle corpus parses")
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1e-12)
}

pub fn check(case: &Case) -> Vec<String> {
    let mut diffs = Vec::new();
    let unit = SourceUnit::new(case.source.clone(), case.id.clone());
    let e = &case.expected;
    let analysis = match analyze(&unit) {
        Ok(a) => a,
        Err(err) => return vec![format!("parse failed: {err}")],
    };
    let r = analysis.raw;
    let raw_ours = (r.loc, r.lloc, r.sloc, r.comment_tokens, r.multi, r.blank, r.single_comments);
    let raw_theirs = (e.loc, e.lloc, e.sloc, e.comments, e.multi, e.blank, e.single_comments);
    if raw_ours != raw_theirs {
        diffs.push(format!("raw {raw_ours:?} != {raw_theirs:?}"));
    }
    let h = analysis.halstead;
    if (h.eta1, h.eta2, h.n1, h.n2) != (e.h1, e.h2, e.N1, e.N2) {
        diffs.push(format!(
            "halstead {:?} != {:?}",
            (h.eta1, h.eta2, h.n1, h.n2),
            (e.h1, e.h2, e.N1, e.N2)
        ));
    }
    let report = snippet_report(&unit).expect("analyzable");
    let mut blocks: Vec<ExpectedBlock> = report
        .complexity
        .per_block
        .iter()
        .map(|b| ExpectedBlock {
            name: b.name.clone(),
            line: b.line,
            complexity: b.complexity,
        })
        .collect();
    blocks.sort_by(|a, b| (a.line, &a.name).cmp(&(b.line, &b.name)));
    if blocks != e.blocks {
        diffs.push(format!("blocks {blocks:?} != {:?}", e.blocks));
    }
    if report.complexity.total != e.total_complexity {
        diffs.push(format!("total cc {} != {}", report.complexity.total, e.total_complexity));
    }
    if report.cc != e.snippet_cc {
        diffs.push(format!("snippet cc {} != {}", report.cc, e.snippet_cc));
    }
    if report.sloc != e.sloc {
        diffs.push(format!("sloc {} != {}", report.sloc, e.sloc));
    }
    if !close(report.halstead.volume, e.volume) {
        diffs.push(format!("volume {} != {}", report.halstead.volume, e.volume));
    }
    if !close(report.halstead_effort, e.effort) {
        diffs.push(format!("effort {} != {}", report.halstead_effort, e.effort));
    }
    if !close(report.maintainability_index, e.mi) {
        diffs.push(format!("mi {} != {}", report.maintainability_index, e.mi));
    }
    diffs
}

/// One line per mismatching snippet.
pub fn failures(corpus: &Corpus) -> Vec<String> {
    corpus
        .cases
        .iter()
        .filter_map(|case| {
            let diffs = check(case);
            (!diffs.is_empty()).then(|| format!("{}:\n  {}", case.id, diffs.join("\n  ")))
        })
        .collect()
}
