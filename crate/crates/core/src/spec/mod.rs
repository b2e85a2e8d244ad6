//! Core specification types: the AST, the term language, value sets, output
//! patterns, and well-formedness checking.

pub mod ast;
pub mod env;
pub mod pattern;
pub mod term;
pub mod value_set;
pub mod well_formed;

pub use ast::Spec;
pub use env::Environment;
pub use pattern::{OutputPattern, Segment};
pub use term::{BoolTerm, CmpOp, EvalError, IntTerm, ListTerm, Term, TermKind, Value, Varname};
pub use value_set::ValueSet;
pub use well_formed::{well_formed, Violation, ViolationKind};
