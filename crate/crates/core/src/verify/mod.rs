//! Seeded property suites with deterministic reports.
//!
//! Case `i` of a run draws from a ChaCha8 stream selected by `i` under the
//! run's seed, so results do not depend on how cases are spread over
//! workers. The reported counterexample is the failing case with the
//! smallest index and re-runs with [`run_case`].

pub mod random;
mod suites;

use std::time::Instant;

use rand::SeedableRng;
use serde::Serialize;
use serde_json::Value as Json;

use crate::error::{Error, Result};
use random::Rng8;

pub use suites::{coarea_instance, coarea_quadrature, flat_fixture, groups_up_to, tensor_brute_force, tensor_case_count};

pub const REPORT_SCHEMA: &str = "gmt-chains/verification-report/v1";

/// Result of one case.
#[derive(Clone, Debug)]
pub enum Outcome {
    Pass,
    /// Instance outside the property's precondition.
    Skip(String),
    Fail { message: String, inputs: Json },
}

impl Outcome {
    pub fn fail(message: impl Into<String>, inputs: Json) -> Outcome {
        Outcome::Fail {
            message: message.into(),
            inputs,
        }
    }

    pub fn check(ok: bool, message: impl Into<String>, inputs: impl FnOnce() -> Json) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::fail(message, inputs())
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Counterexample {
    pub case: usize,
    pub message: String,
    pub inputs: Json,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: String,
    pub suite: String,
    pub seed: u64,
    pub cases: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    pub first_counterexample: Option<Counterexample>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub struct Suite {
    pub name: &'static str,
    pub default_cases: usize,
    pub about: &'static str,
    run: fn(&mut Rng8, usize) -> Outcome,
}

pub fn suites() -> &'static [Suite] {
    suites::ALL
}

pub fn find(name: &str) -> Result<&'static Suite> {
    suites()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| Error::Parse(format!("unknown suite {name:?}")))
}

/// Worker count from `GMT_CHAINS_THREADS`, else the available parallelism.
pub fn worker_count() -> usize {
    std::env::var("GMT_CHAINS_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn case_rng(seed: u64, case: usize) -> Rng8 {
    let mut rng = Rng8::seed_from_u64(seed);
    rng.set_stream(case as u64);
    rng
}

/// Runs one case of a suite.
pub fn run_case(suite: &Suite, seed: u64, case: usize) -> Outcome {
    let mut rng = case_rng(seed, case);
    (suite.run)(&mut rng, case)
}

pub fn run_suite(name: &str, seed: u64, cases: Option<usize>, workers: usize) -> Result<VerificationReport> {
    let suite = find(name)?;
    let cases = cases.unwrap_or(suite.default_cases);
    let workers = workers.clamp(1, cases.max(1));
    let start = Instant::now();
    let mut outcomes: Vec<(usize, Outcome)> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..cases)
                        .step_by(workers)
                        .map(|i| (i, run_case(suite, seed, i)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("verification worker panicked"))
            .collect()
    });
    outcomes.sort_by_key(|(i, _)| *i);
    let mut report = VerificationReport {
        schema: REPORT_SCHEMA.into(),
        suite: name.into(),
        seed,
        cases,
        passed: 0,
        skipped: 0,
        failed: 0,
        first_counterexample: None,
        elapsed_ms: 0,
    };
    for (i, o) in outcomes {
        match o {
            Outcome::Pass => report.passed += 1,
            Outcome::Skip(_) => report.skipped += 1,
            Outcome::Fail { message, inputs } => {
                report.failed += 1;
                if report.first_counterexample.is_none() {
                    report.first_counterexample = Some(Counterexample { case: i, message, inputs });
                }
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_do_not_depend_on_workers() {
        let a = run_suite("boundary-squared", 7, Some(40), 1).unwrap();
        let b = run_suite("boundary-squared", 7, Some(40), 3).unwrap();
        assert_eq!(a.passed, 40);
        assert_eq!((a.passed, a.skipped, a.failed), (b.passed, b.skipped, b.failed));
    }

    #[test]
    fn every_suite_runs_a_few_cases() {
        for s in suites() {
            let r = run_suite(s.name, 1, Some(3), 2).unwrap();
            assert!(r.ok(), "{}: {:?}", s.name, r.first_counterexample);
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(find("nope"), Err(Error::Parse(_))));
    }
}
