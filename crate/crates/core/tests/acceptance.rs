// Copyright 2026 The lindrad Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance criteria 1–12, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use lindrad::validation::{self, Criterion};

fn main() -> ExitCode {
    let runs: Vec<(&str, fn() -> lindrad::Result<Criterion>)> = vec![
        ("01", || Ok(validation::criterion_1())),
        ("02", || Ok(validation::criterion_2())),
        ("03", || Ok(validation::criterion_3())),
        ("04", validation::criterion_4),
        ("05", validation::criterion_5),
        ("06", || Ok(validation::criterion_6())),
        ("07", validation::criterion_7),
        ("08", validation::criterion_8),
        ("09", validation::criterion_9),
        ("10", validation::criterion_10),
        ("11", validation::criterion_11),
        ("12", validation::criterion_12),
    ];
    let mut failed = Vec::new();
    for (id, run) in runs {
        let start = Instant::now();
        match run() {
            Ok(c) => {
                println!("{} ({:.1}s)", c.line(), start.elapsed().as_secs_f64());
                if !c.passed() {
                    failed.push(id);
                }
            }
            Err(e) => {
                println!("[FAIL] {id}: error: {e}");
                failed.push(id);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 12 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {}", failed.join(", "));
        ExitCode::FAILURE
    }
}
