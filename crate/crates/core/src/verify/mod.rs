//! Invariant suites and acceptance criteria behind the `verify` command.

pub mod acceptance;
mod suites;

use std::time::Instant;

use serde::Serialize;

use crate::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    /// One report line: `PASS name (1.23 s): detail`.
    pub fn line(&self) -> String {
        format!(
            "{} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.seconds,
            self.detail
        )
    }
}

/// Runs `body`, which reports `(passed, detail)`; errors become failures.
pub(crate) fn timed<F: FnOnce() -> Result<(bool, String)>>(name: &str, budget: Option<f64>, body: F) -> Check {
    let start = Instant::now();
    let outcome = body();
    let seconds = start.elapsed().as_secs_f64();
    let (mut passed, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    if let Some(limit) = budget {
        if seconds > limit {
            passed = false;
            detail.push_str(&format!("; over the {limit} s budget"));
        }
    }
    Check {
        name: name.to_string(),
        passed,
        detail,
        seconds,
    }
}

pub const SUITES: [&str; 9] = [
    "funcrep",
    "charfn",
    "spectrum",
    "nonuniq",
    "traces",
    "inverse",
    "cli",
    "acceptance",
    "all",
];

pub fn run_suite(name: &str) -> Result<Vec<Check>> {
    let checks = match name {
        "funcrep" => suites::funcrep(),
        "charfn" => suites::charfn(),
        "spectrum" => suites::spectrum(),
        "nonuniq" => suites::nonuniq(),
        "traces" => suites::traces(),
        "inverse" => suites::inverse(),
        "cli" => suites::cli(),
        "acceptance" => acceptance::all(),
        "all" => {
            let mut v = Vec::new();
            for s in &SUITES[..SUITES.len() - 1] {
                v.extend(run_suite(s)?);
            }
            v
        }
        other => {
            return Err(Error::Precondition(format!(
                "unknown suite '{other}', expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(checks)
}
