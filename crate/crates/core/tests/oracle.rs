#[path = "support/oracle.rs"]
mod oracle;

#[test]
fn corpus_is_large_enough() {
    assert!(oracle::corpus().cases.len() >= 200);
}

#[test]
fn every_snippet_matches_the_reference() {
    let failures = oracle::failures(&oracle::corpus());
    assert!(
        failures.is_empty(),
        "{} mismatching snippets\n{}",
        failures.len(),
        failures.join("\n")
    );
}
