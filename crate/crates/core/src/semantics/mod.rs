//! Operational semantics: interpretation, input sampling, example traces,
//! and trace acceptance.

pub mod accept;
pub mod interpret;
pub mod sample;
pub mod trace;

pub use accept::{accept, accept_io};
pub use interpret::{interpret, InterpretError, Limits};
pub use sample::{example_traces, sample_inputs, SampleError};
pub use trace::{Event, Trace, TraceParseError};
