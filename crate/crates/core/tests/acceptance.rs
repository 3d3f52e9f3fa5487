//! Acceptance gate: runs the full validation suite and prints one
//! pass/fail line per criterion.

use casimir_te::validation::run_all;

#[test]
fn acceptance_criteria() {
    let results = run_all();
    let mut all_ok = true;
    for r in &results {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!("[{tag}] {} - {}", r.name, r.detail);
        all_ok &= r.passed;
    }
    assert!(all_ok, "one or more acceptance criteria failed");
}
