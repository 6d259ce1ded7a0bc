//! SLOC, cyclomatic complexity, Halstead effort and maintainability index.

use serde::{Deserialize, Serialize};

use crate::source::{self, BlockKind, BlockTree, OperatorOperandCounts, ParseError, RawCounts, SourceUnit};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct HalsteadReport {
    pub eta1: usize,
    pub eta2: usize,
    pub n1: usize,
    pub n2: usize,
    pub vocabulary: usize,
    pub length: usize,
    pub volume: f64,
    pub difficulty: f64,
    pub effort: f64,
}

pub fn halstead(c: OperatorOperandCounts) -> HalsteadReport {
    let vocabulary = c.eta1 + c.eta2;
    let length = c.n1 + c.n2;
    let volume = if vocabulary == 0 {
        0.0
    } else {
        length as f64 * (vocabulary as f64).log2()
    };
    let difficulty = if c.eta2 == 0 {
        0.0
    } else {
        (c.eta1 * c.n2) as f64 / (2 * c.eta2) as f64
    };
    HalsteadReport {
        eta1: c.eta1,
        eta2: c.eta2,
        n1: c.n1,
        n2: c.n2,
        vocabulary,
        length,
        volume,
        difficulty,
        effort: difficulty * volume,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockScore {
    pub name: String,
    pub kind: BlockKind,
    pub line: u32,
    pub complexity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexityReport {
    /// Top-level functions, classes and methods.
    pub per_block: Vec<BlockScore>,
    /// Mean over `per_block`, or the module score when there are no blocks.
    pub snippet_cc: f64,
    /// Module-level decisions plus those of every block, plus one.
    pub total: u32,
}

pub fn cyclomatic(tree: &BlockTree) -> ComplexityReport {
    let per_block: Vec<BlockScore> = tree
        .reported()
        .filter(|b| b.kind != BlockKind::Module)
        .map(|b| BlockScore {
            name: b.name.clone(),
            kind: b.kind,
            line: b.start_line,
            complexity: b.complexity(),
        })
        .collect();
    let total = tree.total_complexity();
    let snippet_cc = if per_block.is_empty() {
        f64::from(total)
    } else {
        per_block.iter().map(|b| f64::from(b.complexity)).sum::<f64>() / per_block.len() as f64
    };
    ComplexityReport {
        per_block,
        snippet_cc,
        total,
    }
}

/// Maintainability index on a 0..=100 scale.
///
/// `lines` is the logical line count and `comment_fraction` the comment
/// density relative to source lines (1.0 means as many comment lines as
/// source lines; it may exceed 1). The comment term uses the density as a
/// percentage read in degrees.
pub fn maintainability_index(volume: f64, complexity: f64, lines: f64, comment_fraction: f64) -> f64 {
    if volume <= 0.0 || lines <= 0.0 {
        return 100.0;
    }
    unclamped_maintainability_index(volume, complexity, lines, comment_fraction).clamp(0.0, 100.0)
}

/// The rescaled index before clamping; needs positive volume and lines.
pub fn unclamped_maintainability_index(volume: f64, complexity: f64, lines: f64, comment_fraction: f64) -> f64 {
    let comment_term = (2.46 * (comment_fraction * 100.0).to_radians()).sqrt().sin();
    let raw = 171.0 - 5.2 * volume.ln() - 0.23 * complexity - 16.2 * lines.ln() + 50.0 * comment_term;
    raw * 100.0 / 171.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaintainabilityReport {
    pub sloc: usize,
    pub cc: f64,
    pub halstead_effort: f64,
    pub maintainability_index: f64,
    /// Comment-only and docstring lines over all lines.
    pub comment_ratio: f64,
    /// No source lines at all (empty or comment-only input).
    pub degenerate: bool,
    pub halstead: HalsteadReport,
    pub complexity: ComplexityReport,
    pub raw: RawCounts,
}

impl MaintainabilityReport {
    pub fn value(&self, metric: Metric) -> f64 {
        match metric {
            Metric::Sloc => self.sloc as f64,
            Metric::Cc => self.cc,
            Metric::Effort => self.halstead_effort,
            Metric::Mi => self.maintainability_index,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: unanalyzable: {source}")]
pub struct Unanalyzable {
    pub origin: String,
    #[source]
    pub source: ParseError,
}

pub fn snippet_report(unit: &SourceUnit) -> Result<MaintainabilityReport, Unanalyzable> {
    let fail = |source| Unanalyzable {
        origin: unit.origin().to_string(),
        source,
    };
    let analysis = source::analyze(unit).map_err(fail)?;
    let raw = analysis.raw;
    if !raw.complete {
        return Err(fail(ParseError {
            line: raw.loc as u32,
            message: "source ends inside an unterminated construct".into(),
        }));
    }
    let halstead = halstead(analysis.halstead);
    let complexity = cyclomatic(&analysis.blocks);
    let mi = maintainability_index(
        halstead.volume,
        f64::from(complexity.total),
        raw.lloc as f64,
        raw.comment_percent() / 100.0,
    );
    let comment_ratio = if raw.loc == 0 {
        0.0
    } else {
        raw.comment_lines as f64 / raw.loc as f64
    };
    Ok(MaintainabilityReport {
        sloc: raw.sloc,
        cc: complexity.snippet_cc,
        halstead_effort: halstead.effort,
        maintainability_index: mi,
        comment_ratio,
        degenerate: raw.sloc == 0,
        halstead,
        complexity,
        raw,
    })
}

/// One of the four reported metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Sloc,
    Effort,
    Mi,
    Cc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    LowerIsBetter,
    HigherIsBetter,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Sloc, Metric::Effort, Metric::Mi, Metric::Cc];

    pub fn label(self) -> &'static str {
        match self {
            Metric::Sloc => "SLOC",
            Metric::Effort => "HE",
            Metric::Mi => "MI",
            Metric::Cc => "CC",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            Metric::Mi => Direction::HigherIsBetter,
            _ => Direction::LowerIsBetter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("percent change undefined: the new value is zero")]
pub struct DivisionByZero;

/// `(before - after) / after * 100`. A drop is positive, a rise negative,
/// whichever direction is better for the metric.
pub fn percent_change(before: f64, after: f64) -> Result<f64, DivisionByZero> {
    if after == 0.0 {
        return Err(DivisionByZero);
    }
    Ok((before - after) / after * 100.0)
}

/// Whether moving from `before` to `after` is an improvement (or a tie).
pub fn improved(metric: Metric, before: f64, after: f64) -> bool {
    match metric.direction() {
        Direction::LowerIsBetter => after <= before,
        Direction::HigherIsBetter => after >= before,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricChange {
    pub metric: Metric,
    pub before: f64,
    pub after: f64,
    /// `None` when the new value is zero.
    pub percent_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsDelta {
    pub before: MaintainabilityReport,
    pub after: MaintainabilityReport,
    pub changes: Vec<MetricChange>,
}

pub fn delta(before: &MaintainabilityReport, after: &MaintainabilityReport) -> MetricsDelta {
    let changes = Metric::ALL
        .iter()
        .map(|&metric| {
            let (b, a) = (before.value(metric), after.value(metric));
            MetricChange {
                metric,
                before: b,
                after: a,
                percent_change: percent_change(b, a).ok(),
            }
        })
        .collect();
    MetricsDelta {
        before: before.clone(),
        after: after.clone(),
        changes,
    }
}
