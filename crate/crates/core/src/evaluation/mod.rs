//! Corpus statistics, baseline/candidate comparison tables, box-plot
//! summaries and token similarity.

mod boxplot;
mod report;
mod similarity;
mod stats;

pub use boxplot::{distribution, group_distributions, quantile, BoxPlot, BoxPlotSummary};
pub use report::{emit_report, render, Report, ReportFormat, UnsupportedFormat};
pub use similarity::{
    f_beta, summarize_similarity, token_similarity, SimilarityBackend, SimilarityError, SimilarityScores,
    SimilaritySummary, TokenOverlap,
};
pub use stats::{compare, corpus_stats, summarize, AggregateStats, ComparisonRow, ComparisonTable, GroupCounts, MetricStats, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no analyzable values to summarize")]
pub struct EmptyCorpus;
