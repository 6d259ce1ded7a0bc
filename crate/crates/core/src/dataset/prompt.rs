//! The maintainability prompt.

use super::AugmentedRecord;

const HEADER: &str = "You are a Python expert specialising in code optimisation.
    Your main task is to refactor the given Python code to improve upon the listed metrics:
    Source Lines of Code (SLOC), Effort, and Maintainability Index (MI), while retaining the original functionality
### Input:
";

const OBJECTIVES: &str = "### Context:
Objective
- Improve Source Lines of Code (SLOC): Lower numbers are generally better without compromising readability or functionality.
- Improve Maintainability Index (MI): Higher scores are desired.
- Reduce Effort: Lower numbers are preferred.
Original Metrics
";

const CLOSING: &str =
    "Provide only the refactored version of the code with comments on what changes are made on the code and do not provide the metrics.\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PromptMode {
    /// Ends with the response section holding the refactored code.
    Training,
    /// Stops before the response section.
    Inference,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PromptError {
    #[error("record {0} has no metrics for its original code")]
    MissingMetrics(String),
    #[error("record {0} has no refactored code for a training prompt")]
    MissingRefactoredCode(String),
}

/// The values substituted into the template.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PromptValues<'a> {
    pub original_code: &'a str,
    pub sloc: usize,
    pub maintainability_index: f64,
    pub effort: f64,
    pub refactored_code: Option<&'a str>,
}

pub fn render_template(v: &PromptValues<'_>) -> String {
    let mut out = String::with_capacity(HEADER.len() + OBJECTIVES.len() + CLOSING.len() + v.original_code.len() + 128);
    out.push_str(HEADER);
    out.push_str(v.original_code);
    out.push('\n');
    out.push_str(OBJECTIVES);
    out.push_str(&format!("- Source Lines of Code (SLOC): {}\n", v.sloc));
    out.push_str(&format!("- Maintainability Index (MI): {:.2}\n", v.maintainability_index));
    out.push_str(&format!("- Effort: {:.2}\n", v.effort));
    out.push_str(CLOSING);
    if let Some(code) = v.refactored_code {
        out.push_str("### Response:\n");
        out.push_str(code);
        out.push('\n');
    }
    out
}

pub fn render_prompt(record: &AugmentedRecord, mode: PromptMode) -> Result<String, PromptError> {
    let id = || record.record.id.clone();
    let metrics = record
        .original_metrics
        .as_ref()
        .ok_or_else(|| PromptError::MissingMetrics(id()))?;
    let refactored_code = match mode {
        PromptMode::Inference => None,
        PromptMode::Training => Some(
            record
                .record
                .refactored_code
                .as_deref()
                .ok_or_else(|| PromptError::MissingRefactoredCode(id()))?,
        ),
    };
    Ok(render_template(&PromptValues {
        original_code: &record.record.original_code,
        sloc: metrics.sloc,
        maintainability_index: metrics.maintainability_index,
        effort: metrics.halstead_effort,
        refactored_code,
    }))
}
