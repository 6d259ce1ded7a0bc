//! The scripted end-to-end run: load, augment, prompt, refactor against
//! the stub server, gate, and tabulate.

#![allow(dead_code)]

use maintkit::dataset::{augment, parse_records, LoadOptions, Schema};
use maintkit::evaluation::{compare, corpus_stats, render, ComparisonTable, Report, ReportFormat};
use maintkit::refactor::{refactor_records, CompletionConfig, GatePolicy, HttpCompleter, RefactorOutcome};

use super::stub::StubServer;

pub const RECORDS: &str = include_str!("../fixtures/pipeline/records.jsonl");
pub const EXCHANGES: &str = include_str!("../fixtures/pipeline/exchanges.json");
pub const EXPECTED: &str = include_str!("../fixtures/pipeline/expected.md");

pub struct PipelineRun {
    pub outcomes: Vec<RefactorOutcome>,
    pub table: ComparisonTable,
    pub markdown: String,
    pub requests: Vec<String>,
}

pub fn completion_config(url: &str) -> CompletionConfig {
    let mut config = CompletionConfig::new(url, "stub-model");
    config.backoff_initial_ms = 1;
    config.backoff_max_ms = 5;
    config.timeout_secs = 10.0;
    config
}

pub fn run() -> PipelineRun {
    let server = StubServer::from_fixture(EXCHANGES, RECORDS);
    let schema = Schema::Codealpaca;
    let loaded = parse_records(RECORDS.as_bytes(), schema, &LoadOptions::for_schema(schema)).expect("fixture reads");
    assert!(loaded.errors.is_empty(), "{:?}", loaded.errors);
    let records = augment(loaded.records);
    let completer = HttpCompleter::new(completion_config(&server.url)).expect("client builds");
    let outcomes = refactor_records(records, &completer, &GatePolicy::default(), 4);

    let dataset = corpus_stats("dataset", outcomes.iter().map(|o| o.record.refactored_metrics.as_ref())).unwrap();
    let baseline = corpus_stats("baseline", outcomes.iter().map(|o| o.record.original_metrics.as_ref())).unwrap();
    let candidate = corpus_stats(
        "candidate",
        outcomes.iter().map(|o| {
            if o.accepted() {
                o.candidate_metrics.as_ref()
            } else {
                o.record.original_metrics.as_ref()
            }
        }),
    )
    .unwrap();
    let table = compare(Some(&dataset), &baseline, &candidate);
    let markdown = render(Report::Table(&table), ReportFormat::Markdown);
    PipelineRun {
        outcomes,
        table,
        markdown,
        requests: server.requests(),
    }
}
