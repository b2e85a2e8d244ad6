//! Trace acceptance: decides whether a specification permits a trace,
//! honoring output-alternative nondeterminism by backtracking search.

use crate::spec::{Environment, Spec};

use super::interpret::Limits;
use super::trace::{Event, Trace};

/// Position in the event material being matched. Interleaved mode walks a
/// complete trace; split mode matches independently ordered input and
/// output streams (the external-candidate model, where the true
/// interleaving is not observable over pipes).
#[derive(Clone)]
enum Cursor<'a> {
    Interleaved {
        events: &'a [Event],
        pos: usize,
    },
    Split {
        ins: &'a [i64],
        outs: &'a [String],
        in_pos: usize,
        out_pos: usize,
    },
}

impl<'a> Cursor<'a> {
    fn take_in(&self) -> Option<(i64, Cursor<'a>)> {
        match self {
            Cursor::Interleaved { events, pos } => match events.get(*pos) {
                Some(Event::In(v)) => Some((
                    *v,
                    Cursor::Interleaved {
                        events,
                        pos: pos + 1,
                    },
                )),
                _ => None,
            },
            Cursor::Split {
                ins,
                outs,
                in_pos,
                out_pos,
            } => ins.get(*in_pos).map(|v| {
                (
                    *v,
                    Cursor::Split {
                        ins,
                        outs,
                        in_pos: in_pos + 1,
                        out_pos: *out_pos,
                    },
                )
            }),
        }
    }

    fn take_out(&self, text: &str) -> Option<Cursor<'a>> {
        match self {
            Cursor::Interleaved { events, pos } => match events.get(*pos) {
                Some(Event::Out(t)) if t == text => Some(Cursor::Interleaved {
                    events,
                    pos: pos + 1,
                }),
                _ => None,
            },
            Cursor::Split {
                ins,
                outs,
                in_pos,
                out_pos,
            } => match outs.get(*out_pos) {
                Some(t) if t == text => Some(Cursor::Split {
                    ins,
                    outs,
                    in_pos: *in_pos,
                    out_pos: out_pos + 1,
                }),
                _ => None,
            },
        }
    }

    fn done(&self) -> bool {
        match self {
            Cursor::Interleaved { events, pos } => *pos == events.len(),
            Cursor::Split {
                ins,
                outs,
                in_pos,
                out_pos,
            } => *in_pos == ins.len() && *out_pos == outs.len(),
        }
    }
}

#[derive(Clone)]
enum Frame<'a> {
    Then(&'a Spec),
    Loop { body: &'a Spec, iteration: u32 },
}

#[derive(Clone)]
struct State<'a> {
    current: Option<&'a Spec>,
    stack: Vec<Frame<'a>>,
    env: Environment,
    cursor: Cursor<'a>,
    steps: u32,
}

/// True iff the specification permits the complete trace `t`.
///
/// Reads must match the next input event (value inside the declared set),
/// writes must match the next output event against *any* alternative (the
/// empty alternative matches zero events), and the walk must consume the
/// trace exactly when the specification completes. Walks exceeding the
/// limits count as rejection.
pub fn accept(spec: &Spec, trace: &Trace, limits: &Limits) -> bool {
    if !trace.is_terminated() {
        return false;
    }
    search(
        spec,
        Cursor::Interleaved {
            events: trace.events(),
            pos: 0,
        },
        limits,
    )
}

/// Split-stream acceptance: the inputs offered to a candidate and the
/// output lines it produced, with the interleaving taken from the
/// specification itself. Both streams must be consumed exactly.
pub fn accept_io(spec: &Spec, ins: &[i64], outs: &[String], limits: &Limits) -> bool {
    search(
        spec,
        Cursor::Split {
            ins,
            outs,
            in_pos: 0,
            out_pos: 0,
        },
        limits,
    )
}

fn search(spec: &Spec, cursor: Cursor, limits: &Limits) -> bool {
    let step_cap = limits.max_trace_events.saturating_mul(4).max(100_000);
    let mut pending: Vec<State> = vec![State {
        current: Some(spec),
        stack: Vec::new(),
        env: Environment::with_vars(spec.read_vars().iter()),
        cursor,
        steps: 0,
    }];

    'paths: while let Some(mut st) = pending.pop() {
        loop {
            st.steps += 1;
            if st.steps > step_cap {
                continue 'paths;
            }
            let node = match st.current.take() {
                Some(node) => node,
                None => match st.stack.pop() {
                    None => {
                        if st.cursor.done() {
                            return true;
                        }
                        continue 'paths;
                    }
                    Some(Frame::Then(next)) => {
                        st.current = Some(next);
                        continue;
                    }
                    Some(Frame::Loop { body, iteration }) => {
                        if iteration >= limits.max_loop_iterations {
                            continue 'paths;
                        }
                        st.stack.push(Frame::Loop {
                            body,
                            iteration: iteration + 1,
                        });
                        st.current = Some(body);
                        continue;
                    }
                },
            };
            match node {
                Spec::Nop => {}
                Spec::Read(var, vs) => {
                    let Some((value, next)) = st.cursor.take_in() else {
                        continue 'paths;
                    };
                    if !vs.contains(value) {
                        continue 'paths;
                    }
                    if st.env.push(var, value).is_err() {
                        continue 'paths;
                    }
                    st.cursor = next;
                }
                Spec::Write(alts) => {
                    // Branch over the alternatives; the first viable one
                    // continues in place, the rest become pending states.
                    let mut continuations = Vec::new();
                    for alt in alts {
                        if alt.is_empty() {
                            continuations.push(st.cursor.clone());
                        } else {
                            let Ok(text) = alt.render(&st.env) else {
                                continue;
                            };
                            if let Some(next) = st.cursor.take_out(&text) {
                                continuations.push(next);
                            }
                        }
                    }
                    let Some(first) = continuations.first().cloned() else {
                        continue 'paths;
                    };
                    for other in continuations.into_iter().skip(1) {
                        let mut branch = st.clone();
                        branch.cursor = other;
                        pending.push(branch);
                    }
                    st.cursor = first;
                }
                Spec::Branch {
                    cond,
                    when_false,
                    when_true,
                } => {
                    let Ok(value) = cond.eval(&st.env) else {
                        continue 'paths;
                    };
                    st.current = Some(if value { when_true } else { when_false });
                }
                Spec::Loop(body) => {
                    st.stack.push(Frame::Loop { body, iteration: 1 });
                    st.current = Some(body);
                }
                Spec::Exit => {
                    while let Some(frame) = st.stack.pop() {
                        if matches!(frame, Frame::Loop { .. }) {
                            break;
                        }
                    }
                }
                Spec::Seq(a, b) => {
                    st.stack.push(Frame::Then(b));
                    st.current = Some(a);
                }
            }
        }
    }
    false
}
