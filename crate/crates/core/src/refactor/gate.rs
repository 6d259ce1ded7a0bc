//! Accept/reject decisions for a refactoring candidate.

use serde::{Deserialize, Serialize};

use crate::metrics::{Direction, MaintainabilityReport, Metric};

/// One metric check. The candidate passes when it is no worse than the
/// original by more than `tolerance` in the metric's bad direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateRule {
    pub metric: Metric,
    #[serde(default)]
    pub tolerance: f64,
    /// Only mandatory rules can reject a candidate; the rest are reported.
    #[serde(default = "yes")]
    pub mandatory: bool,
}

fn yes() -> bool {
    true
}

impl GateRule {
    pub fn strict(metric: Metric) -> Self {
        GateRule {
            metric,
            tolerance: 0.0,
            mandatory: true,
        }
    }

    pub fn passes(&self, before: f64, after: f64) -> bool {
        match self.metric.direction() {
            Direction::LowerIsBetter => after <= before + self.tolerance,
            Direction::HigherIsBetter => after >= before - self.tolerance,
        }
    }

    fn describe(&self) -> String {
        let (op, sign) = match self.metric.direction() {
            Direction::LowerIsBetter => ("<=", '+'),
            Direction::HigherIsBetter => (">=", '-'),
        };
        let label = self.metric.label();
        if self.tolerance == 0.0 {
            format!("{label} after {op} {label} before")
        } else {
            format!("{label} after {op} {label} before {sign} {}", self.tolerance)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GatePolicy {
    pub rules: Vec<GateRule>,
}

impl Default for GatePolicy {
    /// MI must not fall, effort and SLOC must not rise.
    fn default() -> Self {
        GatePolicy {
            rules: vec![
                GateRule::strict(Metric::Mi),
                GateRule::strict(Metric::Effort),
                GateRule::strict(Metric::Sloc),
            ],
        }
    }
}

impl GatePolicy {
    /// Replaces the rule for `rule.metric`, or adds it.
    pub fn with_rule(mut self, rule: GateRule) -> Self {
        match self.rules.iter_mut().find(|r| r.metric == rule.metric) {
            Some(slot) => *slot = rule,
            None => self.rules.push(rule),
        }
        self
    }

    pub fn without(mut self, metric: Metric) -> Self {
        self.rules.retain(|r| r.metric != metric);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub metric: Metric,
    pub before: f64,
    pub after: f64,
    pub rule: String,
    pub passed: bool,
    pub mandatory: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateDecision {
    pub accepted: bool,
    /// Every evaluated rule, in policy order.
    pub reasons: Vec<RuleOutcome>,
}

impl GateDecision {
    pub fn failures(&self) -> impl Iterator<Item = &RuleOutcome> {
        self.reasons.iter().filter(|r| !r.passed)
    }
}

pub fn gate(before: &MaintainabilityReport, after: &MaintainabilityReport, policy: &GatePolicy) -> GateDecision {
    let reasons: Vec<RuleOutcome> = policy
        .rules
        .iter()
        .map(|rule| {
            let (b, a) = (before.value(rule.metric), after.value(rule.metric));
            RuleOutcome {
                metric: rule.metric,
                before: b,
                after: a,
                rule: rule.describe(),
                passed: rule.passes(b, a),
                mandatory: rule.mandatory,
            }
        })
        .collect();
    GateDecision {
        accepted: reasons.iter().all(|r| r.passed || !r.mandatory),
        reasons,
    }
}
