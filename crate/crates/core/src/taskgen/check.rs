//! Grading: checking a solution against a requirement, with
//! counterexample-style failure messages.

use std::io::Write;
use std::process::{Command, Stdio};

use thiserror::Error;

use crate::harness::{fulfills, run_candidate, CandidateProgram, ExternalCommand, FulfillsConfig};
use crate::semantics::{accept, interpret, InterpretError, Limits, Trace};
use crate::spec::Spec;

use super::require::{Require, Solution};

/// Verdict of one check. Failure messages follow the
/// `Falsified (after N test(s)):` + `<actual> /= <expected>` shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestResult {
    pub passed: bool,
    pub message: String,
    pub counterexample_inputs: Option<Vec<i64>>,
}

impl TestResult {
    fn pass(tests: u32) -> TestResult {
        TestResult {
            passed: true,
            message: format!("+++ OK, passed {}.", plural_tests(tests)),
            counterexample_inputs: None,
        }
    }

    fn fail(after: u32, body: impl Into<String>) -> TestResult {
        TestResult {
            passed: false,
            message: format!(
                "Falsified (after {}):\n{}",
                plural_tests(after),
                body.into()
            ),
            counterexample_inputs: None,
        }
    }
}

fn plural_tests(n: u32) -> String {
    if n == 1 {
        "1 test".to_string()
    } else {
        format!("{n} tests")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("requirement expects a {expected} solution, got {got}")]
    SolutionKindMismatch {
        expected: &'static str,
        got: &'static str,
    },
}

/// Check-time knobs. The syntax checker backs `AlwaysPass` requirements on
/// code solutions: it receives the code on standard input and passes with
/// exit code zero.
#[derive(Debug, Clone, Default)]
pub struct CheckConfig {
    pub limits: Limits,
    pub syntax_checker: Option<ExternalCommand>,
}

pub fn check_solution(
    require: &Require,
    solution: &Solution,
    config: &CheckConfig,
) -> Result<TestResult, CheckError> {
    let mismatch = || CheckError::SolutionKindMismatch {
        expected: require.expected_kind(),
        got: solution.kind(),
    };
    match require {
        Require::ExactInteger { expected } => match solution {
            Solution::Int(n) => Ok(exact(n, expected)),
            _ => Err(mismatch()),
        },
        Require::ExactTrace { expected } => match solution {
            Solution::Trace(t) => Ok(exact(t, expected)),
            _ => Err(mismatch()),
        },
        Require::ExactIndexSet { expected } => match solution {
            Solution::Indices(is) => {
                let mut is = is.clone();
                is.sort_unstable();
                is.dedup();
                if is == *expected {
                    Ok(TestResult::pass(1))
                } else {
                    Ok(TestResult::fail(
                        1,
                        format!("{} /= {}", show_list(&is), show_list(expected)),
                    ))
                }
            }
            _ => Err(mismatch()),
        },
        Require::ExactBool { expected } => match solution {
            Solution::Bool(b) => Ok(exact(&show_bool(*b), &show_bool(*expected))),
            _ => Err(mismatch()),
        },
        Require::Behavior {
            spec,
            n_tests,
            seed,
        } => match solution {
            Solution::Program(candidate) => Ok(check_behavior(
                candidate,
                spec,
                *n_tests,
                *seed,
                &config.limits,
            )),
            _ => Err(mismatch()),
        },
        Require::SampleTrace { spec } => match solution {
            Solution::Trace(t) => {
                if accept(spec, t, &config.limits) {
                    Ok(TestResult::pass(1))
                } else {
                    Ok(TestResult::fail(
                        1,
                        format!("the specification does not accept {t}"),
                    ))
                }
            }
            _ => Err(mismatch()),
        },
        Require::ProducingTraces { traces } => match solution {
            Solution::Program(candidate) => Ok(check_producing(candidate, traces, &config.limits)),
            _ => Err(mismatch()),
        },
        Require::TriggeringDifference { spec1, spec2 } => match solution {
            Solution::Inputs(feed) => Ok(check_difference(spec1, spec2, feed, &config.limits)),
            _ => Err(mismatch()),
        },
        Require::NoSubstring { needle } => match solution {
            Solution::Code(code) => {
                if code.contains(needle.as_str()) {
                    Ok(TestResult::fail(
                        1,
                        format!("the code contains the forbidden fragment {needle:?}"),
                    ))
                } else {
                    Ok(TestResult::pass(1))
                }
            }
            _ => Err(mismatch()),
        },
        Require::AlwaysPass => match (&config.syntax_checker, solution) {
            (Some(checker), Solution::Code(code)) => Ok(run_syntax_checker(checker, code)),
            _ => Ok(TestResult::pass(1)),
        },
        Require::Conjunction { left, right } => {
            let (sol_left, sol_right) = match solution {
                Solution::Pair(a, b) => (a.as_ref(), b.as_ref()),
                other => (other, other),
            };
            let first = check_solution(left, sol_left, config)?;
            if !first.passed {
                return Ok(TestResult {
                    message: format!("first component: {}", first.message),
                    ..first
                });
            }
            let second = check_solution(right, sol_right, config)?;
            if !second.passed {
                return Ok(TestResult {
                    message: format!("second component: {}", second.message),
                    ..second
                });
            }
            Ok(TestResult::pass(1))
        }
    }
}

fn exact<T: std::fmt::Display + PartialEq>(actual: &T, expected: &T) -> TestResult {
    if actual == expected {
        TestResult::pass(1)
    } else {
        TestResult::fail(1, format!("{actual} /= {expected}"))
    }
}

fn show_bool(b: bool) -> &'static str {
    if b {
        "True"
    } else {
        "False"
    }
}

fn show_list<T: std::fmt::Display>(xs: &[T]) -> String {
    let inner: Vec<String> = xs.iter().map(T::to_string).collect();
    format!("[{}]", inner.join(","))
}

fn check_behavior(
    candidate: &CandidateProgram,
    spec: &Spec,
    n_tests: u32,
    seed: u64,
    limits: &Limits,
) -> TestResult {
    let config = FulfillsConfig {
        n_tests,
        seed,
        limits: limits.clone(),
    };
    match fulfills(candidate, spec, &config) {
        Ok(report) => {
            if let Some(failure) = report.first_failure {
                TestResult {
                    counterexample_inputs: Some(failure.feed.clone()),
                    ..TestResult::fail(
                        report.total,
                        format!(
                            "inputs {} yield {}, which the specification does not accept",
                            show_list(&failure.feed),
                            failure.actual
                        ),
                    )
                }
            } else {
                TestResult::pass(report.total)
            }
        }
        Err(e) => TestResult::fail(1, format!("testing aborted: {e}")),
    }
}

fn check_producing(candidate: &CandidateProgram, traces: &[Trace], limits: &Limits) -> TestResult {
    for (i, expected) in traces.iter().enumerate() {
        let feed = expected.inputs();
        let produced = match candidate {
            CandidateProgram::InternalIr(_) => run_candidate(candidate, &feed, limits),
            CandidateProgram::External(cmd) => {
                // Line-based model: compare output lines under the
                // expected trace's interleaving.
                match crate::harness::run_external(cmd, &feed) {
                    Ok(outputs) if outputs == expected.outputs() => Ok(expected.clone()),
                    Ok(outputs) => {
                        let events = feed
                            .iter()
                            .map(|v| crate::semantics::Event::In(*v))
                            .chain(outputs.into_iter().map(crate::semantics::Event::Out))
                            .collect();
                        Ok(Trace::new(events, true))
                    }
                    Err(e) => Err(e),
                }
            }
        };
        match produced {
            Ok(t) if t == *expected => {}
            Ok(t) => {
                return TestResult {
                    counterexample_inputs: Some(feed.clone()),
                    ..TestResult::fail(
                        (i + 1) as u32,
                        format!(
                            "for inputs {} produced {t}, expected {expected}",
                            show_list(&feed)
                        ),
                    )
                };
            }
            Err(e) => {
                return TestResult {
                    counterexample_inputs: Some(feed.clone()),
                    ..TestResult::fail(
                        (i + 1) as u32,
                        format!("run on inputs {} failed: {e}", show_list(&feed)),
                    )
                };
            }
        }
    }
    TestResult::pass(traces.len().max(1) as u32)
}

fn check_difference(spec1: &Spec, spec2: &Spec, feed: &[i64], limits: &Limits) -> TestResult {
    let r1 = interpret(spec1, feed, limits);
    let r2 = interpret(spec2, feed, limits);
    match (r1, r2) {
        (Ok(t1), Ok(t2)) => {
            if t1 == t2 {
                TestResult::fail(1, format!("both programs produce {t1}"))
            } else {
                TestResult::pass(1)
            }
        }
        // One side rejecting an input the other runs on is an observable
        // behavioral difference.
        (Ok(_), Err(InterpretError::ValueOutsideSet { .. }))
        | (Err(InterpretError::ValueOutsideSet { .. }), Ok(_)) => TestResult::pass(1),
        (Err(e), _) => TestResult::fail(
            1,
            format!("the first program cannot run on this input: {e}"),
        ),
        (_, Err(e)) => TestResult::fail(
            1,
            format!("the second program cannot run on this input: {e}"),
        ),
    }
}

fn run_syntax_checker(checker: &ExternalCommand, code: &str) -> TestResult {
    let spawned = Command::new(&checker.command)
        .args(&checker.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::null())
        .stderr(Stdio::null())
        .spawn();
    let mut child = match spawned {
        Ok(child) => child,
        Err(e) => return TestResult::fail(1, format!("syntax checker failed to start: {e}")),
    };
    if let Some(mut stdin) = child.stdin.take() {
        let _ = stdin.write_all(code.as_bytes());
    }
    match child.wait() {
        Ok(status) if status.success() => TestResult::pass(1),
        Ok(status) => TestResult::fail(
            1,
            format!(
                "syntax checker rejected the code (exit {})",
                status.code().unwrap_or(-1)
            ),
        ),
        Err(e) => TestResult::fail(1, format!("syntax checker did not finish: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codegen::{lower_to_ir, Style};
    use crate::dsl::parse_spec;
    use crate::taskgen::require::*;

    fn example_spec() -> Spec {
        parse_spec(
            "read n : nats\n\
             loop {\n  if (len(all(x)) == curr(n)) then { exit } else { read x : ints }\n}\n\
             write [\"{sum(all(x))}\"]\n",
        )
        .unwrap()
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn exact_integer_failure_message() {
        let r = check_solution(&exact_integer(5), &Solution::Int(4), &cfg()).unwrap();
        assert!(!r.passed);
        assert!(r.message.contains("4 /= 5"), "{}", r.message);
        assert!(
            r.message.contains("Falsified (after 1 test):"),
            "{}",
            r.message
        );
        let r = check_solution(&exact_integer(9), &Solution::Int(9), &cfg()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn exact_trace_checks() {
        let t: Trace = "?0 !0 stop".parse().unwrap();
        let r = check_solution(&exact_trace(t.clone()), &Solution::Trace(t), &cfg()).unwrap();
        assert!(r.passed);
    }

    #[test]
    fn sample_trace_checks() {
        let spec = example_spec();
        let good: Trace = "?2 ?1 ?5 !6 stop".parse().unwrap();
        let bad: Trace = "?0 !1 stop".parse().unwrap();
        assert!(
            check_solution(&sample_trace(spec.clone()), &Solution::Trace(good), &cfg())
                .unwrap()
                .passed
        );
        assert!(
            !check_solution(&sample_trace(spec), &Solution::Trace(bad), &cfg())
                .unwrap()
                .passed
        );
        assert!(
            check_solution(
                &sample_trace(Spec::Nop),
                &Solution::Trace("stop".parse().unwrap()),
                &cfg()
            )
            .unwrap()
            .passed
        );
    }

    #[test]
    fn behavior_grades_programs() {
        let spec = example_spec();
        let good = lower_to_ir(&spec, Style::FoldState).unwrap();
        let r = check_solution(
            &behavior(spec.clone(), 100, 3),
            &Solution::Program(CandidateProgram::InternalIr(good)),
            &cfg(),
        )
        .unwrap();
        assert!(r.passed, "{}", r.message);

        let constant = lower_to_ir(
            &parse_spec("read n : nats\nwrite [\"1\"]").unwrap(),
            Style::ListAccum,
        )
        .unwrap();
        let r = check_solution(
            &behavior(spec, 100, 3),
            &Solution::Program(CandidateProgram::InternalIr(constant)),
            &cfg(),
        )
        .unwrap();
        assert!(!r.passed);
        assert!(r.counterexample_inputs.is_some());
    }

    #[test]
    fn producing_traces_requires_exact_reproduction() {
        let spec = example_spec();
        let traces: Vec<Trace> = ["?0 !0 stop", "?2 ?1 ?5 !6 stop"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        let good = lower_to_ir(&spec, Style::ListAccum).unwrap();
        let r = check_solution(
            &producing_traces(traces.clone()),
            &Solution::Program(CandidateProgram::InternalIr(good)),
            &cfg(),
        )
        .unwrap();
        assert!(r.passed, "{}", r.message);

        // Hard-coding the first trace only fails on the second.
        let hardcoded = lower_to_ir(
            &parse_spec("read n : nats\nwrite [\"0\"]").unwrap(),
            Style::ListAccum,
        )
        .unwrap();
        let r = check_solution(
            &producing_traces(traces),
            &Solution::Program(CandidateProgram::InternalIr(hardcoded)),
            &cfg(),
        )
        .unwrap();
        assert!(!r.passed);
        assert_eq!(r.counterexample_inputs, Some(vec![2, 1, 5]));

        // The empty program reproduces the lone stop trace.
        let empty = lower_to_ir(&Spec::Nop, Style::ListAccum).unwrap();
        let r = check_solution(
            &producing_traces(vec!["stop".parse().unwrap()]),
            &Solution::Program(CandidateProgram::InternalIr(empty)),
            &cfg(),
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn triggering_difference_checks() {
        let sum = example_spec();
        let len = parse_spec(
            "read n : nats\n\
             loop {\n  if (len(all(x)) == curr(n)) then { exit } else { read x : ints }\n}\n\
             write [\"{len(all(x))}\"]\n",
        )
        .unwrap();
        let req = triggering_difference(sum.clone(), len);
        assert!(
            check_solution(&req, &Solution::Inputs(vec![1, 9]), &cfg())
                .unwrap()
                .passed
        );
        // A feed where sum == len does not separate them.
        assert!(
            !check_solution(&req, &Solution::Inputs(vec![1, 1]), &cfg())
                .unwrap()
                .passed
        );
        let same = triggering_difference(sum.clone(), sum);
        assert!(
            !check_solution(&same, &Solution::Inputs(vec![2, 3, 4]), &cfg())
                .unwrap()
                .passed
        );
    }

    #[test]
    fn no_lists_flags_concatenation() {
        let r = check_solution(&no_lists(), &Solution::Code("x ++ [v]".into()), &cfg()).unwrap();
        assert!(!r.passed);
        let r = check_solution(
            &no_lists(),
            &Solution::Code("loop (s+v) (l+1)".into()),
            &cfg(),
        )
        .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn always_pass_and_conjunction() {
        assert!(
            check_solution(&compiling_program(), &Solution::Int(0), &cfg())
                .unwrap()
                .passed
        );
        let spec = example_spec();
        let fold = lower_to_ir(&spec, Style::FoldState).unwrap();
        let fold_code = crate::codegen::render_program(
            &fold,
            &crate::codegen::RenderTarget {
                surface: crate::codegen::Surface::HaskellLike,
                holes: crate::codegen::HolePolicy::NoHoles,
            },
            &mut <rand_chacha::ChaCha12Rng as rand::SeedableRng>::seed_from_u64(0),
        );
        let req = conj(behavior(spec, 50, 1), no_lists());
        let sol = Solution::pair(
            Solution::Program(CandidateProgram::InternalIr(fold)),
            Solution::Code(fold_code),
        );
        let r = check_solution(&req, &sol, &cfg()).unwrap();
        assert!(r.passed, "{}", r.message);

        // The list-accumulation rendering fails the second component.
        let list = lower_to_ir(&example_spec(), Style::ListAccum).unwrap();
        let list_code = crate::codegen::render_program(
            &list,
            &crate::codegen::RenderTarget {
                surface: crate::codegen::Surface::HaskellLike,
                holes: crate::codegen::HolePolicy::NoHoles,
            },
            &mut <rand_chacha::ChaCha12Rng as rand::SeedableRng>::seed_from_u64(0),
        );
        let sol = Solution::pair(
            Solution::Program(CandidateProgram::InternalIr(list)),
            Solution::Code(list_code),
        );
        let r = check_solution(&req, &sol, &cfg()).unwrap();
        assert!(!r.passed);
        assert!(r.message.contains("second component"), "{}", r.message);
    }

    #[test]
    fn syntax_checker_hook_backs_always_pass() {
        let mut config = cfg();
        config.syntax_checker = Some(ExternalCommand::new("true", vec![]));
        let r = check_solution(
            &compiling_program(),
            &Solution::Code("main".into()),
            &config,
        )
        .unwrap();
        assert!(r.passed);

        config.syntax_checker = Some(ExternalCommand::new("false", vec![]));
        let r = check_solution(
            &compiling_program(),
            &Solution::Code("main".into()),
            &config,
        )
        .unwrap();
        assert!(!r.passed);
        assert!(r.message.contains("syntax checker"), "{}", r.message);

        // A checker that cannot start is a diagnosed failure, not a crash.
        config.syntax_checker = Some(ExternalCommand::new("/nonexistent-checker", vec![]));
        let r = check_solution(
            &compiling_program(),
            &Solution::Code("main".into()),
            &config,
        )
        .unwrap();
        assert!(!r.passed);
    }

    #[test]
    fn index_sets_reject_strict_sub_and_supersets() {
        let req = exact_index_set(vec![2, 5]);
        let pass = |is: Vec<usize>| {
            check_solution(&req, &Solution::Indices(is), &cfg())
                .unwrap()
                .passed
        };
        assert!(pass(vec![2, 5]));
        assert!(pass(vec![5, 2, 2]));
        assert!(!pass(vec![2]));
        assert!(!pass(vec![2, 5, 6]));
        assert!(!pass(vec![]));
    }

    #[test]
    fn kind_mismatch_is_an_error() {
        let err = check_solution(&exact_integer(5), &Solution::Bool(true), &cfg()).unwrap_err();
        assert_eq!(
            err,
            CheckError::SolutionKindMismatch {
                expected: "integer",
                got: "boolean"
            }
        );
    }
}
