//! Variable environments: each variable carries its full read history.

use std::collections::HashMap;

use super::term::{EvalError, Varname};

/// Maps variables to their historic value lists, oldest first. Histories
/// only grow during one interpretation.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Environment {
    bindings: HashMap<Varname, Vec<i64>>,
}

impl Environment {
    pub fn new() -> Environment {
        Environment::default()
    }

    /// Environment with every given variable bound to an empty history.
    /// Interpretation pre-binds all variables a specification reads, so that
    /// `all(x)` is the empty sequence before the first read of `x` rather
    /// than an unbound-variable error.
    pub fn with_vars<'a>(vars: impl IntoIterator<Item = &'a Varname>) -> Environment {
        let mut env = Environment::new();
        for v in vars {
            env.bind(v.clone());
        }
        env
    }

    pub fn bind(&mut self, var: Varname) {
        self.bindings.entry(var).or_default();
    }

    pub fn push(&mut self, var: &Varname, value: i64) -> Result<(), EvalError> {
        match self.bindings.get_mut(var) {
            Some(history) => {
                history.push(value);
                Ok(())
            }
            None => Err(EvalError::UnboundVariable(var.clone())),
        }
    }

    pub fn all(&self, var: &Varname) -> Result<&[i64], EvalError> {
        self.bindings
            .get(var)
            .map(Vec::as_slice)
            .ok_or_else(|| EvalError::UnboundVariable(var.clone()))
    }

    pub fn current(&self, var: &Varname) -> Result<i64, EvalError> {
        let history = self.all(var)?;
        history
            .last()
            .copied()
            .ok_or_else(|| EvalError::EmptyHistory(var.clone()))
    }
}
