use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::stats::{summarize, Summary};
use crate::source::{tokenize, LexError, SourceUnit, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityScores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub f3: f64,
}

/// F-beta; 0 when the denominator vanishes, and exactly `p` when `p == r`.
pub fn f_beta(p: f64, r: f64, beta: f64) -> f64 {
    if p == r {
        return p;
    }
    let b2 = beta * beta;
    let denom = b2 * p + r;
    if denom > 0.0 {
        (1.0 + b2) * p * r / denom
    } else {
        0.0
    }
}

impl SimilarityScores {
    pub fn from_precision_recall(precision: f64, recall: f64) -> Self {
        SimilarityScores {
            precision,
            recall,
            f1: f_beta(precision, recall, 1.0),
            f3: f_beta(precision, recall, 3.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimilarityError {
    #[error(transparent)]
    Lex(#[from] LexError),
    #[error("similarity backend failed: {0}")]
    Backend(String),
}

/// Scores a generated snippet against a reference. The token-overlap
/// scorer is built in; an embedding service can be plugged in here.
pub trait SimilarityBackend: Sync {
    fn name(&self) -> &str;
    fn score(&self, reference: &SourceUnit, candidate: &SourceUnit) -> Result<SimilarityScores, SimilarityError>;
}

/// Multiset overlap of significant tokens.
#[derive(Debug, Clone, Copy, Default)]
pub struct TokenOverlap;

impl SimilarityBackend for TokenOverlap {
    fn name(&self) -> &str {
        "token-overlap"
    }

    fn score(&self, reference: &SourceUnit, candidate: &SourceUnit) -> Result<SimilarityScores, SimilarityError> {
        Ok(token_similarity(reference, candidate)?)
    }
}

fn significant_tokens(unit: &SourceUnit) -> Result<HashMap<String, usize>, LexError> {
    let mut bag = HashMap::new();
    for t in tokenize(unit)? {
        if !matches!(
            t.kind,
            TokenKind::Comment | TokenKind::Newline | TokenKind::Indent | TokenKind::Dedent
        ) {
            *bag.entry(t.lexeme).or_insert(0) += 1;
        }
    }
    Ok(bag)
}

/// Precision is the shared fraction of the candidate's tokens, recall the
/// shared fraction of the reference's. Comments and layout are ignored.
pub fn token_similarity(reference: &SourceUnit, candidate: &SourceUnit) -> Result<SimilarityScores, LexError> {
    let r = significant_tokens(reference)?;
    let c = significant_tokens(candidate)?;
    let (nr, nc): (usize, usize) = (r.values().sum(), c.values().sum());
    if nr == 0 && nc == 0 {
        return Ok(SimilarityScores::from_precision_recall(1.0, 1.0));
    }
    let shared: usize = c.iter().map(|(tok, &k)| k.min(r.get(tok).copied().unwrap_or(0))).sum();
    let ratio = |n: usize| if n == 0 { 0.0 } else { shared as f64 / n as f64 };
    Ok(SimilarityScores::from_precision_recall(ratio(nc), ratio(nr)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySummary {
    pub backend: String,
    pub pairs: usize,
    pub precision: Summary,
    pub recall: Summary,
    pub f1: Summary,
    pub f3: Summary,
}

pub fn summarize_similarity(backend: &str, scores: &[SimilarityScores]) -> Result<SimilaritySummary, super::EmptyCorpus> {
    let col = |f: fn(&SimilarityScores) -> f64| summarize(&scores.iter().map(f).collect::<Vec<_>>());
    Ok(SimilaritySummary {
        backend: backend.to_string(),
        pairs: scores.len(),
        precision: col(|s| s.precision)?,
        recall: col(|s| s.recall)?,
        f1: col(|s| s.f1)?,
        f3: col(|s| s.f3)?,
    })
}
