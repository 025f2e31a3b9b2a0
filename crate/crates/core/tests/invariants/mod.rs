//! Property checks shared by the property tests and the acceptance suite.
//!
//! Each check draws `cases` random inputs and returns the shrunk
//! counterexample as an error message on failure.

#![allow(dead_code)]

pub mod forecasters;
pub mod metrics;

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, TestCaseResult, TestRunner};

pub const CASES: u32 = 10_000;

pub type Check = fn(u32) -> Result<(), String>;

/// Every check, labelled `module::name`.
pub fn all() -> Vec<(&'static str, Check)> {
    let mut out = Vec::new();
    out.extend(forecasters::CHECKS);
    out.extend(metrics::CHECKS);
    out.extend(asymptotics::CHECKS);
    out
}

fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> TestCaseResult,
) -> Result<(), String> {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new(config)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()) + 1e-300
}
