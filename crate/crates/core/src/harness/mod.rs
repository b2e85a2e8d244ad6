//! The test harness: runs candidate programs (in-process IR or external
//! console processes) against specifications on randomized inputs.
//!
//! With the `parallel` feature (on by default) the test cases of a
//! [`fulfills`] run execute on a rayon pool; [`fulfills_sequential`] is
//! always available and produces bit-identical reports.

pub mod external;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::codegen::{interpret_ir, ProgramIr};
use crate::semantics::{
    accept, accept_io, sample_inputs, Event, InterpretError, Limits, SampleError, Trace,
};
use crate::spec::Spec;

pub use external::{run_external, ExternalCommand, InputPacing};

/// A runnable solution candidate.
#[derive(Debug, Clone, PartialEq)]
pub enum CandidateProgram {
    InternalIr(ProgramIr),
    External(ExternalCommand),
}

impl CandidateProgram {
    pub fn external(command: impl Into<String>, args: Vec<String>) -> CandidateProgram {
        CandidateProgram::External(ExternalCommand::new(command, args))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RunError {
    #[error("candidate timed out")]
    Timeout,
    #[error("candidate exited with code {0}")]
    NonzeroExit(i32),
    #[error("candidate kept reading after the input feed was exhausted")]
    ExtraInputRequested,
    #[error("candidate I/O failed: {0}")]
    Io(String),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
}

/// Runs a candidate on one input feed.
///
/// For external candidates the feed is written as decimal lines and the
/// trace is assembled under the line-based console model: the inputs
/// offered, in order, followed by the output lines produced. Acceptance
/// checking against a specification reconstructs the true interleaving
/// from the specification itself (see [`fulfills`]).
pub fn run_candidate(
    candidate: &CandidateProgram,
    feed: &[i64],
    limits: &Limits,
) -> Result<Trace, RunError> {
    match candidate {
        CandidateProgram::InternalIr(ir) => Ok(interpret_ir(ir, feed, limits)?),
        CandidateProgram::External(cmd) => {
            let outputs = run_external(cmd, feed)?;
            let events = feed
                .iter()
                .map(|v| Event::In(*v))
                .chain(outputs.into_iter().map(Event::Out))
                .collect();
            Ok(Trace::new(events, true))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureActual {
    /// The candidate ran to completion but the trace is not accepted.
    Rejected(Trace),
    /// The candidate run itself failed.
    RunFailed(RunError),
}

impl std::fmt::Display for FailureActual {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureActual::Rejected(t) => write!(f, "{t}"),
            FailureActual::RunFailed(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    /// Zero-based index of the failing test case.
    pub test_index: u32,
    pub feed: Vec<i64>,
    pub actual: FailureActual,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestReport {
    pub total: u32,
    pub passed: u32,
    pub first_failure: Option<Failure>,
}

impl TestReport {
    pub fn all_passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Sampling(#[from] SampleError),
}

#[derive(Debug, Clone)]
pub struct FulfillsConfig {
    pub n_tests: u32,
    pub seed: u64,
    pub limits: Limits,
}

impl Default for FulfillsConfig {
    fn default() -> FulfillsConfig {
        FulfillsConfig {
            n_tests: 100,
            seed: 0,
            limits: Limits::default(),
        }
    }
}

enum Outcome {
    Pass,
    Fail(Box<Failure>),
    Abort(SampleError),
}

fn run_one(
    candidate: &CandidateProgram,
    spec: &Spec,
    index: u32,
    sub_seed: u64,
    limits: &Limits,
) -> Outcome {
    let mut rng = ChaCha12Rng::seed_from_u64(sub_seed);
    let feed = match sample_inputs(spec, &mut rng, limits) {
        Ok(feed) => feed,
        Err(e) => return Outcome::Abort(e),
    };
    let fail = |actual| {
        Outcome::Fail(Box::new(Failure {
            test_index: index,
            feed: feed.clone(),
            actual,
        }))
    };
    match candidate {
        CandidateProgram::InternalIr(ir) => match interpret_ir(ir, &feed, limits) {
            Ok(trace) => {
                if accept(spec, &trace, limits) {
                    Outcome::Pass
                } else {
                    fail(FailureActual::Rejected(trace))
                }
            }
            Err(e) => fail(FailureActual::RunFailed(e.into())),
        },
        CandidateProgram::External(cmd) => match run_external(cmd, &feed) {
            Ok(outputs) => {
                if accept_io(spec, &feed, &outputs, limits) {
                    Outcome::Pass
                } else {
                    let events = feed
                        .iter()
                        .map(|v| Event::In(*v))
                        .chain(outputs.into_iter().map(Event::Out))
                        .collect();
                    fail(FailureActual::Rejected(Trace::new(events, true)))
                }
            }
            Err(e) => fail(FailureActual::RunFailed(e)),
        },
    }
}

/// Seeds for the individual test cases, drawn up front so sequential and
/// parallel execution see identical feeds.
fn sub_seeds(seed: u64, n: u32) -> Vec<u64> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.random()).collect()
}

fn report_from(n_tests: u32, hit: Option<Outcome>) -> Result<TestReport, HarnessError> {
    match hit {
        None => Ok(TestReport {
            total: n_tests,
            passed: n_tests,
            first_failure: None,
        }),
        Some(Outcome::Abort(e)) => Err(e.into()),
        Some(Outcome::Fail(failure)) => Ok(TestReport {
            total: failure.test_index + 1,
            passed: failure.test_index,
            first_failure: Some(*failure),
        }),
        Some(Outcome::Pass) => unreachable!("pass is never a hit"),
    }
}

/// Property-tests a candidate: `n_tests` sampled feeds, each run checked
/// for acceptance, stopping at the lowest-index failure.
#[cfg(feature = "parallel")]
pub fn fulfills(
    candidate: &CandidateProgram,
    spec: &Spec,
    config: &FulfillsConfig,
) -> Result<TestReport, HarnessError> {
    use rayon::prelude::*;
    let seeds = sub_seeds(config.seed, config.n_tests);
    // Individual interpreter runs are microsecond-scale; batching keeps
    // the scheduling overhead below the work itself.
    let hit = seeds
        .par_iter()
        .enumerate()
        .with_min_len(8)
        .map(|(i, s)| run_one(candidate, spec, i as u32, *s, &config.limits))
        .find_first(|o| !matches!(o, Outcome::Pass));
    report_from(config.n_tests, hit)
}

/// Sequential fallback used when the `parallel` feature is disabled.
#[cfg(not(feature = "parallel"))]
pub fn fulfills(
    candidate: &CandidateProgram,
    spec: &Spec,
    config: &FulfillsConfig,
) -> Result<TestReport, HarnessError> {
    fulfills_sequential(candidate, spec, config)
}

/// Single-threaded fulfills; reports are bit-identical to the parallel
/// path.
pub fn fulfills_sequential(
    candidate: &CandidateProgram,
    spec: &Spec,
    config: &FulfillsConfig,
) -> Result<TestReport, HarnessError> {
    let seeds = sub_seeds(config.seed, config.n_tests);
    let hit = seeds
        .iter()
        .enumerate()
        .map(|(i, s)| run_one(candidate, spec, i as u32, *s, &config.limits))
        .find(|o| !matches!(o, Outcome::Pass));
    report_from(config.n_tests, hit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegen::{lower_to_ir, Style};
    use crate::dsl::parse_spec;

    fn example_spec() -> Spec {
        parse_spec(
            "read n : nats\n\
             loop {\n  if (len(all(x)) == curr(n)) then { exit } else { read x : ints }\n}\n\
             write [\"{sum(all(x))}\"]\n",
        )
        .unwrap()
    }

    #[test]
    fn lowered_ir_fulfills_its_spec() {
        let spec = example_spec();
        for style in [Style::ListAccum, Style::FoldState] {
            let ir = lower_to_ir(&spec, style).unwrap();
            let report = fulfills(
                &CandidateProgram::InternalIr(ir),
                &spec,
                &FulfillsConfig::default(),
            )
            .unwrap();
            assert!(report.all_passed(), "{:?}", report.first_failure);
            assert_eq!(report.passed, 100);
        }
    }

    #[test]
    fn constant_output_candidate_fails_with_counterexample() {
        // A program that ignores its input count and prints 0.
        let spec = example_spec();
        let wrong = parse_spec("read n : nats\nwrite [\"0\"]").unwrap();
        let ir = lower_to_ir(&wrong, Style::ListAccum).unwrap();
        let report = fulfills(
            &CandidateProgram::InternalIr(ir),
            &spec,
            &FulfillsConfig::default(),
        )
        .unwrap();
        let failure = report.first_failure.expect("must fail");
        assert_eq!(failure.test_index, report.passed);
        assert!(report.total <= 100);
        // Replaying the counterexample reproduces the failure.
        let wrong_ir = lower_to_ir(&wrong, Style::ListAccum).unwrap();
        let replay = interpret_ir(&wrong_ir, &failure.feed, &Limits::default());
        match (&failure.actual, replay) {
            (FailureActual::Rejected(t), Ok(t2)) => assert_eq!(*t, t2),
            (actual, replay) => panic!("unexpected: {actual:?} vs {replay:?}"),
        }
    }

    #[test]
    fn parallel_and_sequential_reports_match() {
        let spec = example_spec();
        let wrong = parse_spec("read n : nats\nwrite [\"7\"]").unwrap();
        for candidate_spec in [&spec, &wrong] {
            let ir = lower_to_ir(candidate_spec, Style::ListAccum).unwrap();
            let candidate = CandidateProgram::InternalIr(ir);
            let config = FulfillsConfig {
                n_tests: 64,
                seed: 99,
                ..Default::default()
            };
            let par = fulfills(&candidate, &spec, &config).unwrap();
            let seq = fulfills_sequential(&candidate, &spec, &config).unwrap();
            assert_eq!(par, seq);
        }
    }

    #[test]
    fn echo_equivalence_with_interpret_ir() {
        let ir = lower_to_ir(&example_spec(), Style::FoldState).unwrap();
        let limits = Limits::default();
        for feed in [vec![0], vec![2, 1, 5], vec![3, -1, -2, -3]] {
            assert_eq!(
                run_candidate(&CandidateProgram::InternalIr(ir.clone()), &feed, &limits),
                interpret_ir(&ir, &feed, &limits).map_err(RunError::from)
            );
        }
    }

    #[test]
    fn nop_spec_passes_only_silent_candidates() {
        let silent = lower_to_ir(&Spec::Nop, Style::ListAccum).unwrap();
        let report = fulfills(
            &CandidateProgram::InternalIr(silent),
            &Spec::Nop,
            &FulfillsConfig {
                n_tests: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.all_passed());

        let noisy = lower_to_ir(&parse_spec("write [\"1\"]").unwrap(), Style::ListAccum).unwrap();
        let report = fulfills(
            &CandidateProgram::InternalIr(noisy),
            &Spec::Nop,
            &FulfillsConfig {
                n_tests: 10,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!report.all_passed());
    }
}
