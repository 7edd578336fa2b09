use std::time::Instant;

use lsi_core::suite::{criterion, CRITERIA};
use lsi_core::Execution;

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for n in 1..=CRITERIA.len() {
        let start = Instant::now();
        let r = criterion(n, Execution::default()).expect("known criterion");
        let tag = if r.passed() { "PASS" } else { "FAIL" };
        println!(
            "{} criterion {}: {} ({} checks, {} failed, {:.1}s)",
            tag,
            n,
            CRITERIA[n - 1],
            r.checks.len(),
            r.failure_count(),
            start.elapsed().as_secs_f64()
        );
        for c in r.failures() {
            let d: String = c.detail.chars().take(160).collect();
            println!("    {}: {}", c.name, d);
        }
        if !r.passed() {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {:?}", failed);
}
