//! Serializable solution requirements. A requirement is a data descriptor
//! rather than a closure, so grading can run in a different process than
//! generation; specifications embed as their canonical surface text and
//! traces as their display text.

use serde::{Deserialize, Serialize};

use crate::harness::CandidateProgram;
use crate::semantics::Trace;
use crate::spec::Spec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum Require {
    ExactInteger {
        expected: i64,
    },
    ExactTrace {
        expected: Trace,
    },
    /// 1-based indices, kept sorted and deduplicated.
    ExactIndexSet {
        expected: Vec<usize>,
    },
    ExactBool {
        expected: bool,
    },
    /// The candidate program must fulfill the specification under
    /// randomized testing.
    Behavior {
        spec: Spec,
        #[serde(rename = "nTests")]
        n_tests: u32,
        seed: u64,
    },
    /// The answer trace must be accepted by the specification.
    SampleTrace {
        spec: Spec,
    },
    /// The candidate must reproduce each trace exactly on its inputs.
    ProducingTraces {
        traces: Vec<Trace>,
    },
    /// The answer feed must make the two specifications behave differently.
    TriggeringDifference {
        spec1: Spec,
        spec2: Spec,
    },
    /// The answer code must not contain the needle.
    NoSubstring {
        needle: String,
    },
    AlwaysPass,
    Conjunction {
        left: Box<Require>,
        right: Box<Require>,
    },
}

pub fn exact_integer(expected: i64) -> Require {
    Require::ExactInteger { expected }
}

pub fn exact_trace(expected: Trace) -> Require {
    Require::ExactTrace { expected }
}

pub fn exact_index_set(mut expected: Vec<usize>) -> Require {
    expected.sort_unstable();
    expected.dedup();
    Require::ExactIndexSet { expected }
}

pub fn exact_bool(expected: bool) -> Require {
    Require::ExactBool { expected }
}

pub fn behavior(spec: Spec, n_tests: u32, seed: u64) -> Require {
    Require::Behavior {
        spec,
        n_tests,
        seed,
    }
}

pub fn sample_trace(spec: Spec) -> Require {
    Require::SampleTrace { spec }
}

pub fn producing_traces(traces: Vec<Trace>) -> Require {
    Require::ProducingTraces { traces }
}

pub fn triggering_difference(spec1: Spec, spec2: Spec) -> Require {
    Require::TriggeringDifference { spec1, spec2 }
}

pub fn no_substring(needle: impl Into<String>) -> Require {
    Require::NoSubstring {
        needle: needle.into(),
    }
}

/// Rejects code that concatenates onto an accumulation list.
pub fn no_lists() -> Require {
    no_substring("++")
}

/// Syntactic correctness is delegated to the surrounding system; by default
/// everything passes. A check-time hook can run an external checker.
pub fn compiling_program() -> Require {
    Require::AlwaysPass
}

pub fn conj(left: Require, right: Require) -> Require {
    Require::Conjunction {
        left: Box::new(left),
        right: Box::new(right),
    }
}

/// A solution candidate, tagged by kind. Checking validates the kind
/// against the requirement.
#[derive(Debug, Clone, PartialEq)]
pub enum Solution {
    Int(i64),
    Trace(Trace),
    Inputs(Vec<i64>),
    Indices(Vec<usize>),
    Bool(bool),
    Code(String),
    Program(CandidateProgram),
    /// For conjunctions over two solution kinds.
    Pair(Box<Solution>, Box<Solution>),
}

impl Solution {
    pub fn kind(&self) -> &'static str {
        match self {
            Solution::Int(_) => "integer",
            Solution::Trace(_) => "trace",
            Solution::Inputs(_) => "inputs",
            Solution::Indices(_) => "indices",
            Solution::Bool(_) => "boolean",
            Solution::Code(_) => "code",
            Solution::Program(_) => "program",
            Solution::Pair(..) => "pair",
        }
    }

    pub fn pair(a: Solution, b: Solution) -> Solution {
        Solution::Pair(Box::new(a), Box::new(b))
    }
}

impl Require {
    /// The solution kind this requirement grades.
    pub fn expected_kind(&self) -> &'static str {
        match self {
            Require::ExactInteger { .. } => "integer",
            Require::ExactTrace { .. } | Require::SampleTrace { .. } => "trace",
            Require::ExactIndexSet { .. } => "indices",
            Require::ExactBool { .. } => "boolean",
            Require::TriggeringDifference { .. } => "inputs",
            Require::Behavior { .. } | Require::ProducingTraces { .. } => "program",
            Require::NoSubstring { .. } => "code",
            Require::AlwaysPass => "any",
            Require::Conjunction { .. } => "pair",
        }
    }
}
