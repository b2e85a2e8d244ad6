//! Specifications of console I/O behavior, and everything the exercise
//! tooling derives from them: a textual surface syntax, a reference
//! interpreter with trace acceptance, program rendering in two surface
//! languages, seeded generators for specifications and exercise tasks, and
//! a harness that property-tests candidate programs.

pub mod codegen;
pub mod dsl;
pub mod harness;
pub mod semantics;
pub mod spec;
pub mod specgen;
pub mod taskgen;

pub use dsl::{parse_spec, print_spec};
pub use semantics::{accept, example_traces, interpret, sample_inputs, Limits, Trace};
pub use spec::{well_formed, Spec, ValueSet, Varname};
