//! Browser entry points. Every function returns a JSON string so the page
//! needs nothing beyond `JSON.parse`; failures come back as `{"error": ..}`.

use maintkit::evaluation::token_similarity;
use maintkit::metrics::{delta, maintainability_index, snippet_report, Metric};
use maintkit::refactor::{gate, GatePolicy, GateRule};
use maintkit::SourceUnit;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn error(message: impl std::fmt::Display) -> String {
    json!({ "error": message.to_string() }).to_string()
}

/// Metrics for one snippet.
#[wasm_bindgen]
pub fn analyze(code: &str) -> String {
    match snippet_report(&SourceUnit::new(code, "input")) {
        Ok(report) => serde_json::to_string(&report).expect("report serializes"),
        Err(e) => error(e.source),
    }
}

/// Metric deltas, token similarity and the gate verdict for a rewrite.
/// `sloc_tolerance` loosens the SLOC rule; the other rules stay strict.
#[wasm_bindgen]
pub fn compare(original: &str, rewritten: &str, sloc_tolerance: f64) -> String {
    let (a, b) = (SourceUnit::new(original, "original"), SourceUnit::new(rewritten, "rewritten"));
    let before = match snippet_report(&a) {
        Ok(r) => r,
        Err(e) => return error(format!("original: {}", e.source)),
    };
    let after = match snippet_report(&b) {
        Ok(r) => r,
        Err(e) => return error(format!("rewritten: {}", e.source)),
    };
    let policy = GatePolicy::default().with_rule(GateRule {
        metric: Metric::Sloc,
        tolerance: sloc_tolerance.max(0.0),
        mandatory: true,
    });
    let similarity = token_similarity(&a, &b).map_or(Value::Null, |s| json!(s));
    let d = delta(&before, &after);
    json!({
        "changes": d.changes,
        "similarity": similarity,
        "gate": gate(&before, &after, &policy),
    })
    .to_string()
}

/// The index for hand-picked inputs; `comment_percent` is 0..=100-ish
/// comment density relative to source lines.
#[wasm_bindgen]
pub fn mi_explore(volume: f64, complexity: f64, logical_lines: f64, comment_percent: f64) -> f64 {
    maintainability_index(volume, complexity, logical_lines, comment_percent / 100.0)
}
