use maintkit_wasm::{analyze, compare, mi_explore};
use serde_json::Value;

const BUBBLE: &str = "def bubbleSort(arr):
    n = len(arr)
    for i in range(n-1):
        for j in range(0, n-i-1):
            if arr[j] > arr[j+1]:
               arr[j],arr[j+1] = arr[j+1],arr[j]
";

const PRODUCT: &str = "def bubbleSort(arr):
    n = len(arr)
    from itertools import product
    for i, j in product(range(n-1), range(n-1)):
        if arr[j] > arr[j+1]:
            arr[j], arr[j+1] = arr[j+1], arr[j]
";

fn parse(s: String) -> Value {
    serde_json::from_str(&s).expect("bindings return JSON")
}

#[test]
fn analyze_reports_the_page_fields() {
    let r = parse(analyze(BUBBLE));
    assert_eq!(r["sloc"], 6);
    assert_eq!(r["cc"], 4.0);
    assert!((r["maintainability_index"].as_f64().unwrap() - 69.58).abs() < 0.01);
    assert_eq!(r["complexity"]["per_block"][0]["name"], "bubbleSort");
    assert_eq!(r["degenerate"], false);
}

#[test]
fn analyze_returns_errors_as_json() {
    let r = parse(analyze("def f(:\n"));
    assert!(r["error"].as_str().is_some_and(|e| !e.is_empty()));
    assert_eq!(parse(analyze(""))["degenerate"], true);
}

#[test]
fn compare_accepts_the_product_rewrite() {
    let r = parse(compare(BUBBLE, PRODUCT, 0.0));
    assert_eq!(r["gate"]["accepted"], true, "{r}");
    let metrics: Vec<&str> = r["changes"].as_array().unwrap().iter().map(|c| c["metric"].as_str().unwrap()).collect();
    assert_eq!(metrics, ["sloc", "effort", "mi", "cc"]);
    let s = &r["similarity"];
    for key in ["precision", "recall", "f1", "f3"] {
        let v = s[key].as_f64().unwrap();
        assert!(v > 0.0 && v < 1.0, "{key} = {v}");
    }
}

#[test]
fn sloc_tolerance_admits_longer_rewrites() {
    let longer = format!("{BUBBLE}# trailing note\n\n\n");
    let padded = format!("{}    return arr\n", BUBBLE);
    let strict = parse(compare(BUBBLE, &padded, 0.0));
    let loose = parse(compare(BUBBLE, &padded, 1.0));
    let failed: Vec<&str> = strict["gate"]["reasons"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .map(|r| r["metric"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"sloc"), "{strict}");
    let loose_sloc = loose["gate"]["reasons"].as_array().unwrap().iter().find(|r| r["metric"] == "sloc").unwrap();
    assert_eq!(loose_sloc["passed"], true);
    // comments and blank lines are not source lines
    assert_eq!(parse(compare(BUBBLE, &longer, 0.0))["gate"]["accepted"], true);
}

#[test]
fn compare_names_the_unparseable_side() {
    assert!(parse(compare("x = (", "x = 1", 0.0))["error"].as_str().unwrap().starts_with("original"));
    assert!(parse(compare("x = 1", "x = (", 0.0))["error"].as_str().unwrap().starts_with("rewritten"));
}

#[test]
fn explorer_matches_the_analyzer() {
    let r = parse(analyze(BUBBLE));
    let h = &r["halstead"];
    let mi = mi_explore(h["volume"].as_f64().unwrap(), 4.0, 6.0, 0.0);
    assert!((mi - r["maintainability_index"].as_f64().unwrap()).abs() < 1e-9);
    assert!(mi_explore(100.0, 2.0, 10.0, 0.0) > mi_explore(100.0, 12.0, 10.0, 0.0));
    assert_eq!(mi_explore(0.0, 1.0, 0.0, 0.0), 100.0);
    assert!((0.0..=100.0).contains(&mi_explore(1e9, 500.0, 1e5, 40.0)));
}
