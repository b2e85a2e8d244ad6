//! Exercise-task machinery: requirements, solutions, grading, templates,
//! and the built-in task catalog.

mod builtins;
pub mod check;
pub mod choice;
pub mod require;
pub mod template;

pub use check::{check_solution, CheckConfig, CheckError, TestResult};
pub use choice::multiple_choice;
pub use require::{
    behavior, compiling_program, conj, exact_bool, exact_index_set, exact_integer, exact_trace,
    no_lists, no_substring, producing_traces, sample_trace, triggering_difference, Require,
    Solution,
};
pub use template::{
    builtin_template, generate_task_instance, generate_with_solution, template_names, GenError,
    TaskInstance, TaskTemplate, UnknownTemplate,
};
