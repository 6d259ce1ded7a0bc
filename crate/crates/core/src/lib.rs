//! Maintainability metrics for Python code, instruction-dataset curation
//! and evaluation of refactored code.
//!
//! * [`source`] tokenizes and parses Python and extracts blocks, raw line
//!   counts and Halstead operator/operand counts.
//! * [`metrics`] turns those into SLOC, cyclomatic complexity, Halstead
//!   effort and the maintainability index.
//! * [`dataset`] loads, augments, prompts and splits JSONL corpora.
//! * [`refactor`] talks to a chat-completion service and gates candidates.
//! * [`evaluation`] aggregates, compares and renders results.

pub mod dataset;
pub mod evaluation;
pub mod metrics;
pub mod refactor;
pub mod source;

pub use metrics::{snippet_report, MaintainabilityReport};
pub use source::SourceUnit;
