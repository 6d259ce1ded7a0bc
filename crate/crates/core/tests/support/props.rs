//! Property checks shared by the proptest suite and the acceptance runner.
//! Each takes a case count and reports the first counterexample.

#![allow(dead_code)]

use std::collections::HashSet;

use maintkit::dataset::{split_indices, SplitSpec};
use maintkit::evaluation::{distribution, f_beta, summarize, token_similarity, SimilarityScores};
use maintkit::metrics::{halstead, maintainability_index, snippet_report, unclamped_maintainability_index};
use maintkit::source::OperatorOperandCounts;
use maintkit::SourceUnit;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

/// Small straight-line programs of assignments over arithmetic,
/// comparison and boolean expressions.
pub fn program() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["a", "b", "c", "d", "x"]).prop_map(String::from),
        (0u32..20).prop_map(|n| n.to_string()),
        Just("1.5".to_string()),
        Just("'s'".to_string()),
    ];
    let expr = leaf.prop_recursive(4, 24, 2, |inner| {
        let ops = prop::sample::select(vec!["+", "-", "*", "/", "//", "%", "**", "<", "==", "and", "or", "|", "<<"]);
        prop_oneof![
            (inner.clone(), ops, inner.clone()).prop_map(|(l, o, r)| format!("({l} {o} {r})")),
            inner.clone().prop_map(|e| format!("(-{e})")),
            inner.clone().prop_map(|e| format!("(not {e})")),
            (inner.clone(), inner.clone(), inner).prop_map(|(c, t, f)| format!("({t} if {c} else {f})")),
        ]
    });
    prop::collection::vec(
        (prop::sample::select(vec!["a", "b", "c", "y", "z"]), expr),
        1..6,
    )
    .prop_map(|stmts| stmts.iter().map(|(n, e)| format!("{n} = {e}\n")).collect())
}

pub fn mi_in_range(cases: u32) -> Result<(), String> {
    run(
        cases,
        (0.0..1e7f64, 0.0..500f64, 0.0..1e5f64, 0.0..5.0f64),
        |(v, g, l, c)| {
            let mi = maintainability_index(v, g, l, c);
            prop_assert!((0.0..=100.0).contains(&mi), "MI {mi} for V={v} G={g} L={l} C={c}");
            Ok(())
        },
    )?;
    run(cases, program(), |code| {
        let r = snippet_report(&SourceUnit::inline(code.clone())).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!((0.0..=100.0).contains(&r.maintainability_index), "{code}");
        Ok(())
    })
}

pub fn effort_identity(cases: u32) -> Result<(), String> {
    let counts = (0usize..60, 0usize..60, 0usize..200, 0usize..200).prop_map(|(e1, e2, x1, x2)| OperatorOperandCounts {
        eta1: e1,
        eta2: e2,
        n1: e1 + x1,
        n2: e2 + x2,
    });
    run(cases, counts, |c| {
        let h = halstead(c);
        prop_assert_eq!(h.effort, h.difficulty * h.volume);
        prop_assert_eq!(h.length, c.n1 + c.n2);
        prop_assert_eq!(h.vocabulary, c.eta1 + c.eta2);
        Ok(())
    })?;
    run(cases, program(), |code| {
        let r = snippet_report(&SourceUnit::inline(code.clone())).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let h = r.halstead;
        prop_assert_eq!(r.halstead_effort, h.difficulty * h.volume);
        prop_assert_eq!(h.length, h.n1 + h.n2);
        prop_assert_eq!(h.vocabulary, h.eta1 + h.eta2);
        Ok(())
    })
}

pub fn mi_decreasing_in_complexity(cases: u32) -> Result<(), String> {
    run(
        cases,
        (1e-3..1e7f64, 0u32..400, 1u32..400, 1e-3..1e5f64, 0.0..3.0f64),
        |(v, g, step, l, c)| {
            let (g1, g2) = (f64::from(g), f64::from(g + step));
            let (a, b) = (
                unclamped_maintainability_index(v, g1, l, c),
                unclamped_maintainability_index(v, g2, l, c),
            );
            prop_assert!(a > b, "MI({g1}) = {a} is not above MI({g2}) = {b}");
            Ok(())
        },
    )
}

fn split_spec() -> impl Strategy<Value = (usize, SplitSpec)> {
    let ratios = (0usize..3000, 0u32..=100, 0u32..=100, any::<u64>()).prop_map(|(n, a, b, seed)| {
        let (lo, hi) = (a.min(b), a.max(b));
        let (t, v, s) = (f64::from(lo) / 100.0, f64::from(hi - lo) / 100.0, f64::from(100 - hi) / 100.0);
        let spec = SplitSpec::ratios(t, v, 1.0 - t - v, seed).or_else(|_| SplitSpec::ratios(t, v, s, seed));
        (n, spec.expect("ratios from a partition of 100"))
    });
    let sizes = (0usize..1500, 0usize..1500, 0usize..1500, any::<u64>())
        .prop_map(|(t, v, s, seed)| (t + v + s, SplitSpec::sizes(t, v, s, seed)));
    prop_oneof![ratios, sizes]
}

pub fn split_partition(cases: u32) -> Result<(), String> {
    run(cases, split_spec(), |(n, spec)| {
        let a = split_indices(n, &spec).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let sizes = spec.sizes_for(n).unwrap();
        prop_assert_eq!(
            (a.train.len(), a.validation.len(), a.test.len()),
            (sizes.train, sizes.validation, sizes.test)
        );
        let mut all: Vec<usize> = a.train.iter().chain(&a.validation).chain(&a.test).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>(), "parts must cover 0..n exactly once");
        prop_assert_eq!(split_indices(n, &spec).unwrap(), a, "same seed, same membership");
        Ok(())
    })
}

fn check_fbeta(s: SimilarityScores) -> Result<(), TestCaseError> {
    let (p, r) = (s.precision, s.recall);
    for v in [p, r, s.f1, s.f3] {
        prop_assert!((0.0..=1.0).contains(&v));
    }
    if p == r {
        prop_assert_eq!(s.f1, p);
        prop_assert_eq!(s.f3, p);
    } else {
        let f1 = if p + r > 0.0 { 2.0 * p * r / (p + r) } else { 0.0 };
        let f3 = if 9.0 * p + r > 0.0 { (1.0 + 9.0) * p * r / (9.0 * p + r) } else { 0.0 };
        prop_assert_eq!(s.f1, f1);
        prop_assert_eq!(s.f3, f3);
    }
    if p * r > 0.0 && (p - r).abs() > 1e-9 {
        prop_assert_eq!(s.f3 >= s.f1, r >= p);
    }
    Ok(())
}

pub fn fbeta_identities(cases: u32) -> Result<(), String> {
    let unit = prop_oneof![Just(0.0), Just(1.0), 0.0..=1.0f64];
    run(cases, (unit.clone(), unit), |(p, r)| {
        check_fbeta(SimilarityScores::from_precision_recall(p, r))?;
        prop_assert_eq!(f_beta(p, r, 3.0), SimilarityScores::from_precision_recall(p, r).f3);
        Ok(())
    })?;
    run(cases, (program(), program()), |(a, b)| {
        let s = token_similarity(&SourceUnit::inline(a), &SourceUnit::inline(b))
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        check_fbeta(s)
    })
}

fn values() -> impl Strategy<Value = Vec<f64>> {
    let value = prop_oneof![
        -1e6..1e6f64,
        (0i32..20).prop_map(f64::from),
        Just(0.0),
        Just(100.0),
    ];
    prop::collection::vec(value, 1..=100)
}

pub fn boxplot_containment(cases: u32) -> Result<(), String> {
    run(cases, values(), |v| {
        let b = distribution(&v).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(b.q1 <= b.median && b.median <= b.q3);
        let iqr = b.q3 - b.q1;
        let (lo, hi) = (b.q1 - 1.5 * iqr, b.q3 + 1.5 * iqr);
        prop_assert!(lo <= b.whisker_low && b.whisker_high <= hi);
        let outliers: Vec<f64> = v.iter().copied().filter(|x| *x < lo || *x > hi).collect();
        prop_assert_eq!(b.outliers.len(), outliers.len());
        for x in &v {
            if b.outliers.contains(x) {
                prop_assert!(*x < b.whisker_low || *x > b.whisker_high);
            } else {
                prop_assert!(b.whisker_low <= *x && *x <= b.whisker_high);
            }
        }
        // whiskers sit on data points
        prop_assert!(v.contains(&b.whisker_low) && v.contains(&b.whisker_high));
        Ok(())
    })
}

fn close(a: f64, b: f64, scale: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-12 * scale
}

pub fn stats_brute_force(cases: u32) -> Result<(), String> {
    run(cases, values(), |v| {
        let s = summarize(&v).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let n = v.len() as f64;
        let mean: f64 = v.iter().sum::<f64>() / n;
        let min = v.iter().copied().fold(f64::INFINITY, f64::min);
        let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut sorted = v.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let m = sorted.len();
        let median = if m % 2 == 1 {
            sorted[m / 2]
        } else {
            (sorted[m / 2 - 1] + sorted[m / 2]) / 2.0
        };
        let std = if m < 2 {
            0.0
        } else {
            (v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
        };
        let scale = min.abs().max(max.abs()).max(1.0);
        prop_assert_eq!(s.count, m);
        prop_assert_eq!((s.min, s.max), (min, max));
        prop_assert_eq!(s.median, median);
        prop_assert!(close(s.mean, mean, scale), "mean {} vs {}", s.mean, mean);
        prop_assert!(close(s.std, std, scale), "std {} vs {}", s.std, std);
        // laws
        prop_assert!(s.min <= s.mean && s.mean <= s.max);
        prop_assert!(s.min <= s.median && s.median <= s.max);
        let distinct: HashSet<u64> = v.iter().map(|x| x.to_bits()).collect();
        prop_assert_eq!(s.std == 0.0, distinct.len() == 1 || (min == max));
        let mut reversed = v.clone();
        reversed.reverse();
        prop_assert_eq!(summarize(&reversed).unwrap().median, s.median);
        Ok(())
    })
}
