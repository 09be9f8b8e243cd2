//! Runs every acceptance criterion and prints one line per criterion.
//! Built without the libtest harness so the lines are never captured.

use std::process::ExitCode;

use itconn_core::suite::{run, CRITERIA, DEFAULT_SEED};

fn main() -> ExitCode {
    let seed = std::env::var("ITCONN_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    println!("acceptance (seed {seed})");
    let mut failed = vec![];
    for &(id, _, _) in CRITERIA.iter() {
        let r = run(id, seed).expect("known criterion");
        println!("criterion {:>2} {}: {} ({} checks, {} ms)", r.id, r.title, if r.passed { "PASS" } else { "FAIL" }, r.checks, r.millis);
        for f in &r.failures {
            println!("    {f}");
        }
        if !r.passed {
            failed.push(r.id);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", CRITERIA.len());
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
