//! Prints one line per acceptance criterion and fails on any unexpected red.

use std::process::ExitCode;

use transfer_lab::acceptance::run_all;
use transfer_lab::spectra::{period_check, reference_alphas};

/// Criteria that cannot be met as stated; see the A6 analysis in the README.
const KNOWN_RED: [&str; 1] = ["A6"];

/// A6 is red only through the q = 2 truncation tail at N = 60.
fn a6_red_is_truncation_only() -> bool {
    let alphas = reference_alphas();
    let at_2 = period_check(2.0, 60, &alphas).unwrap();
    let others = [3.0, 5.0].iter().all(|&q| period_check(q, 60, &alphas).unwrap().max_relative_deviation <= 1e-8);
    let longer = period_check(2.0, 200, &alphas).unwrap().max_relative_deviation <= 1e-8;
    at_2.max_relative_deviation > 1e-8 && at_2.certified_tail > 1e-8 && others && longer
}

fn main() -> ExitCode {
    let rows = run_all();
    for row in &rows {
        println!("{row}");
    }
    let unexpected: Vec<&str> = rows.iter().filter(|r| !r.pass && !KNOWN_RED.contains(&r.id)).map(|r| r.id).collect();
    let mut ok = rows.len() == 8 && unexpected.is_empty();
    if !unexpected.is_empty() {
        println!("unexpected failures: {unexpected:?}");
    }
    if rows.iter().any(|r| r.id == "A6" && !r.pass) {
        let explained = a6_red_is_truncation_only();
        println!("A6 red explained by q = 2 truncation tail: {explained}");
        ok &= explained;
    }
    println!("acceptance: {}", if ok { "ok" } else { "FAILED" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
