// Copyright 2026 The coupled-emitters Authors
// SPDX-License-Identifier: Apache-2.0

//! A small pass/fail ledger for numbered acceptance criteria.
//!
//! Each criterion collects named sub-checks; the criterion passes only if
//! every sub-check does. [`Report::finish`] prints one line per criterion
//! and returns whether all of them passed.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Criterion {
    pub number: u32,
    pub title: String,
    pub checks: Vec<Check>,
    pub elapsed: Duration,
}

impl Criterion {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn line(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        let mut s = format!(
            "criterion {:>2} {verdict}  {} ({:.2?})",
            self.number, self.title, self.elapsed
        );
        for c in &self.checks {
            let mark = if c.passed { "ok  " } else { "FAIL" };
            let _ = write!(s, "\n    {mark} {}: {}", c.name, c.detail);
        }
        s
    }
}

/// Records checks for one criterion.
#[derive(Debug)]
pub struct Recorder {
    checks: Vec<Check>,
}

impl Recorder {
    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> bool {
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail: detail.into(),
        });
        passed
    }

    /// `|value − target| ≤ tol`.
    pub fn close(&mut self, name: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        let err = (value - target).abs();
        self.check(
            name,
            err <= tol,
            format!("{value:.10} vs {target:.10}, |err| = {err:.3e} (tol {tol:.1e})"),
        )
    }

    /// `|value/target − 1| ≤ tol`.
    pub fn close_rel(&mut self, name: impl Into<String>, value: f64, target: f64, tol: f64) -> bool {
        let err = (value / target - 1.0).abs();
        self.check(
            name,
            err <= tol,
            format!("{value:.6} vs {target:.6}, rel err = {err:.3e} (tol {tol:.1e})"),
        )
    }

    /// `value ≤ limit`, for error norms.
    pub fn below(&mut self, name: impl Into<String>, value: f64, limit: f64) -> bool {
        self.check(name, value <= limit, format!("{value:.3e} (limit {limit:.1e})"))
    }

    /// Records a failed check for an error that stopped the criterion.
    pub fn error(&mut self, name: impl Into<String>, err: impl std::fmt::Display) {
        self.check(name, false, format!("error: {err}"));
    }
}

#[derive(Debug, Default)]
pub struct Report {
    criteria: Vec<Criterion>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    /// Runs `body` as criterion `number` and prints its line immediately.
    pub fn run<F: FnOnce(&mut Recorder)>(&mut self, number: u32, title: &str, body: F) {
        let mut rec = Recorder { checks: Vec::new() };
        let start = Instant::now();
        body(&mut rec);
        let c = Criterion {
            number,
            title: title.to_string(),
            checks: rec.checks,
            elapsed: start.elapsed(),
        };
        println!("{}", c.line());
        self.criteria.push(c);
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    /// Prints the summary; true when every criterion passed.
    pub fn finish(&self) -> bool {
        let failed: Vec<u32> = self.criteria.iter().filter(|c| !c.passed()).map(|c| c.number).collect();
        println!();
        for c in &self.criteria {
            println!(
                "criterion {:>2}: {}",
                c.number,
                if c.passed() { "PASS" } else { "FAIL" }
            );
        }
        println!(
            "{} of {} criteria passed{}",
            self.criteria.len() - failed.len(),
            self.criteria.len(),
            if failed.is_empty() {
                String::new()
            } else {
                format!("; failing: {failed:?}")
            }
        );
        failed.is_empty()
    }
}
