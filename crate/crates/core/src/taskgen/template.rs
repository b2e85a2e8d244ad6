//! Task templates and instances. A template couples a parameter source
//! with an instance builder; instantiation is deterministic in
//! (template, seed).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::codegen::RetriesExhausted;
use crate::semantics::SampleError;

use super::builtins::Builtin;
use super::require::{Require, Solution};

/// A rendered exercise: the question text and the requirement a correct
/// solution has to meet.
#[derive(Debug, Clone, PartialEq)]
pub struct TaskInstance {
    pub question: String,
    pub requires: Require,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TaskTemplate {
    builtin: Builtin,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown template {0:?}; available: {names}", names = template_names().join(", "))]
pub struct UnknownTemplate(pub String);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error(transparent)]
    Pair(#[from] crate::specgen::GenError),
    #[error(transparent)]
    Sampling(#[from] SampleError),
    #[error(transparent)]
    Rendering(#[from] RetriesExhausted),
    #[error(transparent)]
    Holes(#[from] crate::codegen::RenderError),
}

/// The nine built-in templates by name.
pub fn builtin_template(name: &str) -> Result<TaskTemplate, UnknownTemplate> {
    Builtin::from_name(name)
        .map(|builtin| TaskTemplate { builtin })
        .ok_or_else(|| UnknownTemplate(name.to_string()))
}

pub fn template_names() -> Vec<&'static str> {
    Builtin::NAMES.to_vec()
}

impl TaskTemplate {
    pub fn name(&self) -> &'static str {
        self.builtin.name()
    }
}

/// Instantiates the template: the parameter is drawn first, then the
/// instance, from a seed-split random source.
pub fn generate_task_instance(
    template: &TaskTemplate,
    seed: u64,
) -> Result<TaskInstance, GenError> {
    generate_with_solution(template, seed).map(|(instance, _)| instance)
}

/// Like [`generate_task_instance`], also returning the generator-known
/// solution; every generated task is solvable by construction.
pub fn generate_with_solution(
    template: &TaskTemplate,
    seed: u64,
) -> Result<(TaskInstance, Solution), GenError> {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let param_seed: u64 = rng.random();
    let inst_seed: u64 = rng.random();
    template.builtin.generate(param_seed, inst_seed)
}

/// Joins text blocks with single newlines, normalizing trailing newlines,
/// and ends with one.
pub(super) fn join_blocks(blocks: &[&str]) -> String {
    let mut out = String::new();
    for block in blocks {
        out.push_str(block.trim_end_matches('\n'));
        out.push('\n');
    }
    out
}
