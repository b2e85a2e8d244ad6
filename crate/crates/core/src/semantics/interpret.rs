//! The reference interpreter: runs a specification deterministically
//! against an input feed and records the trace.

use thiserror::Error;

use crate::spec::{Environment, EvalError, Spec, ValueSet, Varname};

use super::trace::{Event, Trace};

/// Termination guards for interpretation, acceptance and sampling.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    pub max_loop_iterations: u32,
    pub max_trace_events: u32,
}

impl Default for Limits {
    fn default() -> Limits {
        Limits {
            max_loop_iterations: 1000,
            max_trace_events: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InterpretError {
    #[error("input feed exhausted at a read action")]
    InputsExhausted,
    #[error("value {value} for {var} is outside the declared value set")]
    ValueOutsideSet { var: Varname, value: i64 },
    #[error("loop iteration limit exceeded")]
    LoopLimitExceeded,
    #[error("trace event limit exceeded")]
    TraceLimitExceeded,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Where read actions get their values from. The interpreter proper
/// consumes a fixed feed; the sampler draws from value sets instead.
pub(crate) trait InputSource {
    /// Produces the value for one read. `loop_iteration` is the iteration
    /// count of the innermost enclosing loop, when there is one.
    fn next_value(
        &mut self,
        var: &Varname,
        vs: &ValueSet,
        loop_iteration: Option<u32>,
    ) -> Result<i64, InterpretError>;
}

pub(crate) struct FeedSource<'a> {
    feed: &'a [i64],
    pos: usize,
}

impl<'a> FeedSource<'a> {
    pub(crate) fn new(feed: &'a [i64]) -> FeedSource<'a> {
        FeedSource { feed, pos: 0 }
    }
}

impl InputSource for FeedSource<'_> {
    fn next_value(
        &mut self,
        var: &Varname,
        vs: &ValueSet,
        _loop_iteration: Option<u32>,
    ) -> Result<i64, InterpretError> {
        let value = *self
            .feed
            .get(self.pos)
            .ok_or(InterpretError::InputsExhausted)?;
        self.pos += 1;
        if !vs.contains(value) {
            return Err(InterpretError::ValueOutsideSet {
                var: var.clone(),
                value,
            });
        }
        Ok(value)
    }
}

enum Frame<'a> {
    /// Remaining second half of a sequence.
    Then(&'a Spec),
    /// An active loop; re-runs its body on fall-through.
    Loop { body: &'a Spec, iteration: u32 },
}

/// Executes `spec` with values drawn from `src`. Shared by [`interpret`]
/// and the input sampler.
pub(crate) fn run_spec(
    spec: &Spec,
    src: &mut impl InputSource,
    limits: &Limits,
) -> Result<Trace, InterpretError> {
    let mut env = Environment::with_vars(spec.read_vars().iter());
    let mut events: Vec<Event> = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    let mut current: Option<&Spec> = Some(spec);

    let push_event = |events: &mut Vec<Event>, e: Event| -> Result<(), InterpretError> {
        if events.len() as u32 >= limits.max_trace_events {
            return Err(InterpretError::TraceLimitExceeded);
        }
        events.push(e);
        Ok(())
    };

    loop {
        let node = match current.take() {
            Some(node) => node,
            // Fall through to the next continuation frame.
            None => match stack.pop() {
                None => return Ok(Trace::new(events, true)),
                Some(Frame::Then(next)) => {
                    current = Some(next);
                    continue;
                }
                Some(Frame::Loop { body, iteration }) => {
                    if iteration >= limits.max_loop_iterations {
                        return Err(InterpretError::LoopLimitExceeded);
                    }
                    stack.push(Frame::Loop {
                        body,
                        iteration: iteration + 1,
                    });
                    current = Some(body);
                    continue;
                }
            },
        };
        match node {
            Spec::Nop => {}
            Spec::Read(var, vs) => {
                let iteration = stack.iter().rev().find_map(|f| match f {
                    Frame::Loop { iteration, .. } => Some(*iteration),
                    Frame::Then(_) => None,
                });
                let value = src.next_value(var, vs, iteration)?;
                env.push(var, value)?;
                push_event(&mut events, Event::In(value))?;
            }
            Spec::Write(alts) => {
                // Generation resolves output nondeterminism by always
                // choosing the first alternative; acceptance honors all.
                if let Some(first) = alts.first() {
                    if !first.is_empty() {
                        let text = first.render(&env)?;
                        push_event(&mut events, Event::Out(text))?;
                    }
                }
            }
            Spec::Branch {
                cond,
                when_false,
                when_true,
            } => {
                current = Some(if cond.eval(&env)? {
                    when_true
                } else {
                    when_false
                });
            }
            Spec::Loop(body) => {
                stack.push(Frame::Loop { body, iteration: 1 });
                current = Some(body);
            }
            Spec::Exit => {
                // Unwind to the innermost loop, dropping the rest of its
                // body. A stray top-level exit just ends the program; the
                // well-formedness check rejects that shape up front.
                while let Some(frame) = stack.pop() {
                    if matches!(frame, Frame::Loop { .. }) {
                        break;
                    }
                }
            }
            Spec::Seq(a, b) => {
                stack.push(Frame::Then(b));
                current = Some(a);
            }
        }
    }
}

/// Runs `spec` on `feed` and returns the complete trace.
///
/// Reads consume feed values in order (erroring if a value falls outside
/// the declared set), writes emit the first alternative of their pattern
/// list, and loops run until an exit fires or the limit trips.
pub fn interpret(spec: &Spec, feed: &[i64], limits: &Limits) -> Result<Trace, InterpretError> {
    run_spec(spec, &mut FeedSource::new(feed), limits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{BoolTerm, CmpOp, IntTerm, OutputPattern, Varname};

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    /// read n : nats; loop { if (len(all(x)) == curr(n)) exit else read x };
    /// write sum(all(x))
    pub(crate) fn example_spec() -> Spec {
        Spec::sequence([
            Spec::Read(var("n"), ValueSet::Nats),
            Spec::till_exit(Spec::branch(
                BoolTerm::cmp(
                    CmpOp::Eq,
                    IntTerm::length_of(var("x")),
                    IntTerm::current(var("n")),
                ),
                Spec::Read(var("x"), ValueSet::Ints),
                Spec::Exit,
            )),
            Spec::write_one(OutputPattern::splice(IntTerm::sum_of(var("x")))),
        ])
    }

    #[test]
    fn example_zero_reads() {
        let t = interpret(&example_spec(), &[0], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?0 !0 stop");
    }

    #[test]
    fn example_two_reads() {
        let t = interpret(&example_spec(), &[2, 10, 10], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?2 ?10 ?10 !20 stop");
    }

    #[test]
    fn example_hand_evaluated() {
        let t = interpret(&example_spec(), &[1, 9], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?1 ?9 !9 stop");
    }

    #[test]
    fn feed_exhaustion() {
        let err = interpret(&example_spec(), &[2, 10], &Limits::default()).unwrap_err();
        assert_eq!(err, InterpretError::InputsExhausted);
    }

    #[test]
    fn value_outside_set() {
        let err = interpret(&example_spec(), &[-1], &Limits::default()).unwrap_err();
        assert_eq!(
            err,
            InterpretError::ValueOutsideSet {
                var: var("n"),
                value: -1
            }
        );
    }

    #[test]
    fn loop_limit_trips() {
        // loop { read x } never exits.
        let s = Spec::till_exit(Spec::Read(var("x"), ValueSet::Ints));
        let feed: Vec<i64> = (0..2000).collect();
        let err = interpret(&s, &feed, &Limits::default()).unwrap_err();
        assert_eq!(err, InterpretError::LoopLimitExceeded);
    }

    #[test]
    fn nop_yields_stop() {
        let t = interpret(&Spec::Nop, &[], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "stop");
    }

    #[test]
    fn leftover_feed_is_not_an_error() {
        let t = interpret(&example_spec(), &[1, 9, 42], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?1 ?9 !9 stop");
    }

    #[test]
    fn skip_first_alternative_writes_nothing() {
        let s = Spec::Write(vec![OutputPattern::empty(), OutputPattern::text("hi")]);
        let t = interpret(&s, &[], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "stop");
    }

    #[test]
    fn exit_skips_rest_of_loop_body() {
        // loop { if (len(all(x)) == 1) exit else nop; read x } reads once.
        let s = Spec::till_exit(Spec::sequence([
            Spec::branch(
                BoolTerm::cmp(CmpOp::Eq, IntTerm::length_of(var("x")), IntTerm::lit(1)),
                Spec::Nop,
                Spec::Exit,
            ),
            Spec::Read(var("x"), ValueSet::Ints),
        ]));
        let t = interpret(&s, &[7, 8], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?7 stop");
    }
}
