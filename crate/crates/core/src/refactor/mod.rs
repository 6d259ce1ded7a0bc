//! Refactoring candidates: pulling code out of completions, gating on
//! metric regressions, and running the prompt → completion → gate loop.

#[cfg(feature = "client")]
mod client;
mod gate;

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::dataset::{render_prompt, AugmentedRecord, PromptMode};
use crate::metrics::{snippet_report, MaintainabilityReport};
use crate::source::SourceUnit;

#[cfg(feature = "client")]
pub use client::{CompletionConfig, HttpCompleter};
pub use gate::{gate, GateDecision, GatePolicy, GateRule, RuleOutcome};

/// Text returned by a completion service.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Completion {
    pub text: String,
    /// Requests made, including the successful one.
    pub attempts: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error("authentication rejected (HTTP {status})")]
    Auth { status: u16 },
    #[error("rate limited after {attempts} attempts")]
    RateLimited { attempts: u32 },
    #[error("timed out after {attempts} attempts")]
    Timeout { attempts: u32 },
    #[error("server error HTTP {status} after {attempts} attempts")]
    Server { status: u16, attempts: u32 },
    #[error("request rejected with HTTP {status}: {body}")]
    Rejected { status: u16, body: String },
    #[error("malformed response: {0}")]
    MalformedResponse(String),
    #[error("transport failure after {attempts} attempts: {message}")]
    Transport { message: String, attempts: u32 },
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
}

/// Anything that turns a prompt into a completion.
pub trait Completer: Sync {
    fn complete(&self, prompt: &str) -> Result<Completion, ClientError>;
}

impl<F> Completer for F
where
    F: Fn(&str) -> Result<Completion, ClientError> + Sync,
{
    fn complete(&self, prompt: &str) -> Result<Completion, ClientError> {
        self(prompt)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("completion holds no code")]
pub struct EmptyCandidate;

fn is_fence(line: &str) -> bool {
    line.trim_start().starts_with("```")
}

fn is_metric_report(line: &str) -> bool {
    let t = line
        .trim()
        .trim_start_matches(['-', '*', '#', '>'])
        .trim_start()
        .trim_start_matches("**")
        .to_ascii_lowercase();
    const LABELS: [&str; 10] = [
        "sloc",
        "source lines of code",
        "mi score",
        "mi",
        "maintainability index",
        "effort",
        "halstead effort",
        "cc",
        "cc score",
        "cyclomatic complexity",
    ];
    LABELS.iter().any(|label| {
        t.strip_prefix(label).is_some_and(|rest| {
            let rest = rest.trim_start_matches("**").trim_start();
            let rest = match rest.strip_prefix('(') {
                Some(r) => r.split_once(')').map_or("", |(_, after)| after).trim_start(),
                None => rest,
            };
            rest.starts_with(':')
        })
    })
}

/// Pulls the code out of a completion: the first fenced block if there is
/// one, else the whole text, minus trailing metric lines such as
/// `MI Score: 80`. Comment lines (e.g. a list of changes) are kept.
pub fn extract_code(completion: &str) -> Result<String, EmptyCandidate> {
    let lines: Vec<&str> = completion.lines().collect();
    let body: &[&str] = match lines.iter().position(|l| is_fence(l)) {
        Some(open) => {
            let rest = &lines[open + 1..];
            let close = rest.iter().position(|l| is_fence(l)).unwrap_or(rest.len());
            &rest[..close]
        }
        None => &lines,
    };
    let mut end = body.len();
    while end > 0 && (body[end - 1].trim().is_empty() || is_metric_report(body[end - 1])) {
        end -= 1;
    }
    let start = body[..end].iter().position(|l| !l.trim().is_empty()).unwrap_or(end);
    if start == end {
        return Err(EmptyCandidate);
    }
    Ok(body[start..end].join("\n"))
}

/// Why a record got no accepted candidate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SkipReason {
    UnanalyzableOriginal,
    ClientError,
    EmptyCandidate,
    UnanalyzableCandidate,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefactorOutcome {
    /// The input record, unchanged.
    pub record: AugmentedRecord,
    /// Code extracted from the completion.
    pub candidate_code: Option<String>,
    pub candidate_metrics: Option<MaintainabilityReport>,
    pub decision: Option<GateDecision>,
    pub skipped: Option<SkipReason>,
    pub detail: Option<String>,
    pub attempts: u32,
}

impl RefactorOutcome {
    pub fn accepted(&self) -> bool {
        self.decision.as_ref().is_some_and(|d| d.accepted)
    }

    /// The accepted candidate, else the original code.
    pub fn final_code(&self) -> &str {
        match &self.candidate_code {
            Some(code) if self.accepted() => code,
            _ => &self.record.record.original_code,
        }
    }
}

fn refactor_one(record: AugmentedRecord, completer: &dyn Completer, policy: &GatePolicy) -> RefactorOutcome {
    let mut out = RefactorOutcome {
        record,
        candidate_code: None,
        candidate_metrics: None,
        decision: None,
        skipped: None,
        detail: None,
        attempts: 0,
    };
    let skip = |mut out: RefactorOutcome, reason, detail: String| {
        out.skipped = Some(reason);
        out.detail = Some(detail);
        out
    };
    let before = match (&out.record.original_metrics, out.record.is_usable()) {
        (Some(m), true) => m.clone(),
        _ => return skip(out, SkipReason::UnanalyzableOriginal, "original code not analyzable".into()),
    };
    let prompt = match render_prompt(&out.record, PromptMode::Inference) {
        Ok(p) => p,
        Err(e) => return skip(out, SkipReason::UnanalyzableOriginal, e.to_string()),
    };
    let completion = match completer.complete(&prompt) {
        Ok(c) => c,
        Err(e) => return skip(out, SkipReason::ClientError, e.to_string()),
    };
    out.attempts = completion.attempts;
    let code = match extract_code(&completion.text) {
        Ok(c) => c,
        Err(e) => return skip(out, SkipReason::EmptyCandidate, e.to_string()),
    };
    out.candidate_code = Some(code.clone());
    let after = match snippet_report(&SourceUnit::new(code, out.record.record.id.clone())) {
        Ok(r) => r,
        Err(e) => return skip(out, SkipReason::UnanalyzableCandidate, e.source.to_string()),
    };
    out.decision = Some(gate(&before, &after, policy));
    out.candidate_metrics = Some(after);
    out
}

/// Runs every record through prompt, completion, extraction and the gate
/// with at most `concurrency` completions in flight. Output order equals
/// input order.
pub fn refactor_records(
    records: Vec<AugmentedRecord>,
    completer: &dyn Completer,
    policy: &GatePolicy,
    concurrency: usize,
) -> Vec<RefactorOutcome> {
    let n = records.len();
    let inputs: Vec<Mutex<Option<AugmentedRecord>>> = records.into_iter().map(|r| Mutex::new(Some(r))).collect();
    let outputs: Vec<Mutex<Option<RefactorOutcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..concurrency.clamp(1, n.max(1)) {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let record = inputs[i].lock().unwrap().take().expect("each record taken once");
                let outcome = refactor_one(record, completer, policy);
                *outputs[i].lock().unwrap() = Some(outcome);
            });
        }
    });
    outputs
        .into_iter()
        .map(|m| m.into_inner().unwrap().expect("every record processed"))
        .collect()
}
