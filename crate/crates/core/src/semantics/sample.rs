//! Input sampling: co-executes a specification, drawing each read from its
//! value set so the resulting feed interprets cleanly.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::spec::{BoolTerm, CmpOp, IntTerm, ListTerm, Spec, Term, ValueSet, Varname};

use super::interpret::{run_spec, InputSource, InterpretError, Limits};
use super::trace::Trace;

/// Attempts per sampled feed before giving up.
const SAMPLE_RETRIES: u32 = 100;
/// Loop iterations after which a detected sentinel value is forced, keeping
/// sentinel-driven loops short.
const SENTINEL_CAP: u32 = 10;
/// Chance of drawing the sentinel early, for varied trace lengths.
const SENTINEL_CHANCE: f64 = 0.25;
/// Bound for loop-counter variables (see [`narrowed_vars`]).
const COUNTER_HI: i64 = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SampleError {
    #[error("sampling failed after {retries} attempts; last error: {last}")]
    SamplingFailed { retries: u32, last: InterpretError },
}

/// Variables whose draws are narrowed to `[0, 10]`: any nats-read variable
/// that is compared via `==` against the length of some history. Those act
/// as loop counters, and full-range draws would make traces enormous.
fn narrowed_vars(spec: &Spec) -> BTreeSet<Varname> {
    let mut nats_read = BTreeSet::new();
    spec.visit(&mut |s| {
        if let Spec::Read(v, ValueSet::Nats) = s {
            nats_read.insert(v.clone());
        }
    });
    let mut narrowed = BTreeSet::new();
    spec.for_each_term(&mut |t| {
        collect_counter_vars(t, &nats_read, &mut narrowed);
    });
    narrowed
}

fn collect_counter_vars(term: &Term, nats_read: &BTreeSet<Varname>, out: &mut BTreeSet<Varname>) {
    let mut visit_bool = |b: &BoolTerm| visit_bool_term(b, nats_read, out);
    if let Term::Bool(b) = term {
        visit_bool(b);
    }
}

fn visit_bool_term(b: &BoolTerm, nats_read: &BTreeSet<Varname>, out: &mut BTreeSet<Varname>) {
    match b {
        BoolTerm::Cmp(CmpOp::Eq, l, r) => {
            let pairs = [(l, r), (r, l)];
            for (len_side, var_side) in pairs {
                if let (IntTerm::Length(ListTerm::All(_)), IntTerm::Current(v)) =
                    (len_side.as_ref(), var_side.as_ref())
                {
                    if nats_read.contains(v) {
                        out.insert(v.clone());
                    }
                }
            }
        }
        BoolTerm::Cmp(..) => {}
        BoolTerm::And(l, r) | BoolTerm::Or(l, r) => {
            visit_bool_term(l, nats_read, out);
            visit_bool_term(r, nats_read, out);
        }
        BoolTerm::Not(t) => visit_bool_term(t, nats_read, out),
    }
}

/// Variables that act as loop sentinels, mapped to the sentinel value:
/// `curr(v) == k` (either orientation) guarding a branch whose true side
/// contains an exit. The sampler forces the sentinel once a loop has run
/// [`SENTINEL_CAP`] iterations, which also bounds the magnitude of products
/// over the history.
fn sentinel_vars(spec: &Spec) -> BTreeMap<Varname, i64> {
    let mut sentinels = BTreeMap::new();
    spec.visit(&mut |s| {
        if let Spec::Branch {
            cond, when_true, ..
        } = s
        {
            if !contains_exit(when_true) {
                return;
            }
            if let BoolTerm::Cmp(CmpOp::Eq, l, r) = cond {
                match (l.as_ref(), r.as_ref()) {
                    (IntTerm::Current(v), IntTerm::Lit(k))
                    | (IntTerm::Lit(k), IntTerm::Current(v)) => {
                        sentinels.insert(v.clone(), *k);
                    }
                    _ => {}
                }
            }
        }
    });
    sentinels
}

fn contains_exit(spec: &Spec) -> bool {
    let mut found = false;
    spec.visit(&mut |s| {
        if matches!(s, Spec::Exit) {
            found = true;
        }
    });
    found
}

struct SamplerSource<'a> {
    rng: &'a mut ChaCha12Rng,
    narrowed: &'a BTreeSet<Varname>,
    sentinels: &'a BTreeMap<Varname, i64>,
    drawn: Vec<i64>,
}

impl InputSource for SamplerSource<'_> {
    fn next_value(
        &mut self,
        var: &Varname,
        vs: &ValueSet,
        loop_iteration: Option<u32>,
    ) -> Result<i64, InterpretError> {
        let value = if let (Some(&k), Some(iter)) = (self.sentinels.get(var), loop_iteration) {
            if vs.contains(k) && (iter >= SENTINEL_CAP || self.rng.random_bool(SENTINEL_CHANCE)) {
                k
            } else {
                self.draw(var, vs)
            }
        } else {
            self.draw(var, vs)
        };
        self.drawn.push(value);
        Ok(value)
    }
}

impl SamplerSource<'_> {
    fn draw(&mut self, var: &Varname, vs: &ValueSet) -> i64 {
        if self.narrowed.contains(var) && *vs == ValueSet::Nats {
            self.rng.random_range(0..=COUNTER_HI)
        } else {
            vs.sample(self.rng)
        }
    }
}

/// Samples an input feed that interprets cleanly: the co-execution *is* an
/// interpretation, so a successful draw is valid by construction. Draws
/// that blow a limit (or overflow an aggregate) are retried.
pub fn sample_inputs(
    spec: &Spec,
    rng: &mut ChaCha12Rng,
    limits: &Limits,
) -> Result<Vec<i64>, SampleError> {
    let narrowed = narrowed_vars(spec);
    let sentinels = sentinel_vars(spec);
    let mut last = InterpretError::LoopLimitExceeded;
    for _ in 0..SAMPLE_RETRIES {
        let mut src = SamplerSource {
            rng,
            narrowed: &narrowed,
            sentinels: &sentinels,
            drawn: Vec::new(),
        };
        match run_spec(spec, &mut src, limits) {
            Ok(_) => return Ok(src.drawn),
            Err(e) => last = e,
        }
    }
    Err(SampleError::SamplingFailed {
        retries: SAMPLE_RETRIES,
        last,
    })
}

/// Retries per slot before duplicate traces are allowed through.
const DEDUP_RETRIES: u32 = 100;

/// Generates `n` example traces, deduplicated by rejection sampling and
/// ordered by ascending input length (ties keep generation order).
pub fn example_traces(
    spec: &Spec,
    n: usize,
    rng: &mut ChaCha12Rng,
    limits: &Limits,
) -> Result<Vec<Trace>, SampleError> {
    let mut traces: Vec<Trace> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut candidate = None;
        for _ in 0..DEDUP_RETRIES {
            let feed = sample_inputs(spec, rng, limits)?;
            let trace = super::interpret::interpret(spec, &feed, limits)
                .expect("sampled feed must interpret cleanly");
            if !traces.contains(&trace) {
                candidate = Some(trace);
                break;
            }
            candidate = Some(trace);
        }
        traces.push(candidate.expect("at least one draw"));
    }
    traces.sort_by_key(|t| t.inputs().len());
    Ok(traces)
}
