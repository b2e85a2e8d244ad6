//! The term language: typed, syntactically inspectable expressions over
//! historic variables.
//!
//! Terms come in three kinds (integer, integer sequence, boolean), enforced
//! by construction through three separate enums. Every term is both
//! evaluable against an [`Environment`] and traversable as plain data, which
//! is what the code generator relies on.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::env::Environment;

/// A specification variable name. Nonempty, `[a-zA-Z][a-zA-Z0-9_]*`, and not
/// one of the surface-syntax keywords (those could never round-trip through
/// the printer).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Varname(String);

/// Words reserved by the surface syntax; not usable as variable names.
pub const RESERVED_WORDS: &[&str] = &[
    "read", "write", "if", "then", "else", "loop", "exit", "skip", "ints", "nats", "range", "all",
    "curr", "len", "sum", "prod", "not",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvalidVarname {
    #[error("variable name is empty")]
    Empty,
    #[error("variable name {0:?} does not match [a-zA-Z][a-zA-Z0-9_]*")]
    BadPattern(String),
    #[error("variable name {0:?} is a reserved word")]
    Reserved(String),
}

impl Varname {
    pub fn new(name: impl Into<String>) -> Result<Self, InvalidVarname> {
        let name = name.into();
        let mut chars = name.chars();
        match chars.next() {
            None => return Err(InvalidVarname::Empty),
            Some(c) if !c.is_ascii_alphabetic() => {
                return Err(InvalidVarname::BadPattern(name));
            }
            Some(_) => {}
        }
        if !chars.all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(InvalidVarname::BadPattern(name));
        }
        if RESERVED_WORDS.contains(&name.as_str()) {
            return Err(InvalidVarname::Reserved(name));
        }
        Ok(Varname(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Varname {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A value a term can evaluate to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    List(Vec<i64>),
    Bool(bool),
}

impl Value {
    pub fn kind(&self) -> TermKind {
        match self {
            Value::Int(_) => TermKind::Int,
            Value::List(_) => TermKind::IntList,
            Value::Bool(_) => TermKind::Bool,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    Int,
    IntList,
    Bool,
}

impl fmt::Display for TermKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermKind::Int => f.write_str("integer"),
            TermKind::IntList => f.write_str("integer sequence"),
            TermKind::Bool => f.write_str("boolean"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(Varname),
    #[error("variable {0} has no value yet")]
    EmptyHistory(Varname),
    #[error("integer overflow during evaluation")]
    Overflow,
}

/// Comparison operators over integer terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Neq,
    Lt,
    Leq,
    Gt,
    Geq,
}

impl CmpOp {
    pub const ALL: [CmpOp; 6] = [
        CmpOp::Eq,
        CmpOp::Neq,
        CmpOp::Lt,
        CmpOp::Leq,
        CmpOp::Gt,
        CmpOp::Geq,
    ];

    pub fn apply(self, l: i64, r: i64) -> bool {
        match self {
            CmpOp::Eq => l == r,
            CmpOp::Neq => l != r,
            CmpOp::Lt => l < r,
            CmpOp::Leq => l <= r,
            CmpOp::Gt => l > r,
            CmpOp::Geq => l >= r,
        }
    }

    /// Operator with the complementary relation, used when a loop condition
    /// has to be rendered negated.
    pub fn negated(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Neq,
            CmpOp::Neq => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Geq,
            CmpOp::Geq => CmpOp::Lt,
            CmpOp::Leq => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Leq,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "==",
            CmpOp::Neq => "/=",
            CmpOp::Lt => "<",
            CmpOp::Leq => "<=",
            CmpOp::Gt => ">",
            CmpOp::Geq => ">=",
        }
    }
}

/// Integer-valued terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntTerm {
    Lit(i64),
    /// The most recent value read into a variable.
    Current(Varname),
    Add(Box<IntTerm>, Box<IntTerm>),
    Sub(Box<IntTerm>, Box<IntTerm>),
    Mul(Box<IntTerm>, Box<IntTerm>),
    Sum(ListTerm),
    Product(ListTerm),
    Length(ListTerm),
}

/// Sequence-valued terms. The full history of a variable is the only
/// sequence producer in the catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListTerm {
    All(Varname),
}

/// Boolean-valued terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoolTerm {
    Cmp(CmpOp, Box<IntTerm>, Box<IntTerm>),
    And(Box<BoolTerm>, Box<BoolTerm>),
    Or(Box<BoolTerm>, Box<BoolTerm>),
    Not(Box<BoolTerm>),
}

/// A term of any kind, for places that are kind-generic (splices, error
/// reporting, traversals).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Int(IntTerm),
    List(ListTerm),
    Bool(BoolTerm),
}

impl IntTerm {
    pub fn lit(n: i64) -> IntTerm {
        IntTerm::Lit(n)
    }

    pub fn current(v: Varname) -> IntTerm {
        IntTerm::Current(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(l: IntTerm, r: IntTerm) -> IntTerm {
        IntTerm::Add(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(l: IntTerm, r: IntTerm) -> IntTerm {
        IntTerm::Sub(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: IntTerm, r: IntTerm) -> IntTerm {
        IntTerm::Mul(Box::new(l), Box::new(r))
    }

    pub fn sum_of(v: Varname) -> IntTerm {
        IntTerm::Sum(ListTerm::All(v))
    }

    pub fn product_of(v: Varname) -> IntTerm {
        IntTerm::Product(ListTerm::All(v))
    }

    pub fn length_of(v: Varname) -> IntTerm {
        IntTerm::Length(ListTerm::All(v))
    }

    pub fn eval(&self, env: &Environment) -> Result<i64, EvalError> {
        match self {
            IntTerm::Lit(n) => Ok(*n),
            IntTerm::Current(v) => env.current(v),
            IntTerm::Add(l, r) => l
                .eval(env)?
                .checked_add(r.eval(env)?)
                .ok_or(EvalError::Overflow),
            IntTerm::Sub(l, r) => l
                .eval(env)?
                .checked_sub(r.eval(env)?)
                .ok_or(EvalError::Overflow),
            IntTerm::Mul(l, r) => l
                .eval(env)?
                .checked_mul(r.eval(env)?)
                .ok_or(EvalError::Overflow),
            IntTerm::Sum(l) => {
                let xs = l.eval(env)?;
                xs.iter()
                    .try_fold(0i64, |acc, &x| acc.checked_add(x))
                    .ok_or(EvalError::Overflow)
            }
            IntTerm::Product(l) => {
                let xs = l.eval(env)?;
                xs.iter()
                    .try_fold(1i64, |acc, &x| acc.checked_mul(x))
                    .ok_or(EvalError::Overflow)
            }
            IntTerm::Length(l) => Ok(l.eval(env)?.len() as i64),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&Varname)) {
        match self {
            IntTerm::Lit(_) => {}
            IntTerm::Current(v) => f(v),
            IntTerm::Add(l, r) | IntTerm::Sub(l, r) | IntTerm::Mul(l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            IntTerm::Sum(l) | IntTerm::Product(l) | IntTerm::Length(l) => l.for_each_var(f),
        }
    }
}

impl ListTerm {
    pub fn eval<'e>(&self, env: &'e Environment) -> Result<&'e [i64], EvalError> {
        match self {
            ListTerm::All(v) => env.all(v),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&Varname)) {
        match self {
            ListTerm::All(v) => f(v),
        }
    }
}

impl BoolTerm {
    pub fn cmp(op: CmpOp, l: IntTerm, r: IntTerm) -> BoolTerm {
        BoolTerm::Cmp(op, Box::new(l), Box::new(r))
    }

    pub fn and(l: BoolTerm, r: BoolTerm) -> BoolTerm {
        BoolTerm::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BoolTerm, r: BoolTerm) -> BoolTerm {
        BoolTerm::Or(Box::new(l), Box::new(r))
    }

    pub fn negate(l: BoolTerm) -> BoolTerm {
        BoolTerm::Not(Box::new(l))
    }

    pub fn eval(&self, env: &Environment) -> Result<bool, EvalError> {
        match self {
            BoolTerm::Cmp(op, l, r) => Ok(op.apply(l.eval(env)?, r.eval(env)?)),
            BoolTerm::And(l, r) => Ok(l.eval(env)? && r.eval(env)?),
            BoolTerm::Or(l, r) => Ok(l.eval(env)? || r.eval(env)?),
            BoolTerm::Not(t) => Ok(!t.eval(env)?),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&Varname)) {
        match self {
            BoolTerm::Cmp(_, l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            BoolTerm::And(l, r) | BoolTerm::Or(l, r) => {
                l.for_each_var(f);
                r.for_each_var(f);
            }
            BoolTerm::Not(t) => t.for_each_var(f),
        }
    }
}

impl Term {
    pub fn kind(&self) -> TermKind {
        match self {
            Term::Int(_) => TermKind::Int,
            Term::List(_) => TermKind::IntList,
            Term::Bool(_) => TermKind::Bool,
        }
    }

    pub fn eval(&self, env: &Environment) -> Result<Value, EvalError> {
        match self {
            Term::Int(t) => t.eval(env).map(Value::Int),
            Term::List(t) => t.eval(env).map(|xs| Value::List(xs.to_vec())),
            Term::Bool(t) => t.eval(env).map(Value::Bool),
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&Varname)) {
        match self {
            Term::Int(t) => t.for_each_var(f),
            Term::List(t) => t.for_each_var(f),
            Term::Bool(t) => t.for_each_var(f),
        }
    }
}

// Display renders the canonical surface syntax. Precedence levels (loosest
// to tightest): || (1), && (2), not (3), comparisons (4), +/- (5), * (6),
// atoms (7). Binary operators parse left-associatively, so a right child at
// the same level needs parentheses to round-trip.

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_NOT: u8 = 3;
const PREC_CMP: u8 = 4;
const PREC_ADD: u8 = 5;
const PREC_MUL: u8 = 6;
const PREC_ATOM: u8 = 7;

impl IntTerm {
    fn prec(&self) -> u8 {
        match self {
            IntTerm::Add(..) | IntTerm::Sub(..) => PREC_ADD,
            IntTerm::Mul(..) => PREC_MUL,
            _ => PREC_ATOM,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.prec();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            IntTerm::Lit(n) => write!(f, "{n}")?,
            IntTerm::Current(v) => write!(f, "curr({v})")?,
            IntTerm::Add(l, r) => {
                l.fmt_prec(f, prec)?;
                write!(f, " + ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            IntTerm::Sub(l, r) => {
                l.fmt_prec(f, prec)?;
                write!(f, " - ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            IntTerm::Mul(l, r) => {
                l.fmt_prec(f, prec)?;
                write!(f, " * ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            IntTerm::Sum(l) => write!(f, "sum({l})")?,
            IntTerm::Product(l) => write!(f, "prod({l})")?,
            IntTerm::Length(l) => write!(f, "len({l})")?,
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for IntTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for ListTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ListTerm::All(v) => write!(f, "all({v})"),
        }
    }
}

impl BoolTerm {
    fn prec(&self) -> u8 {
        match self {
            BoolTerm::Or(..) => PREC_OR,
            BoolTerm::And(..) => PREC_AND,
            BoolTerm::Not(..) => PREC_NOT,
            BoolTerm::Cmp(..) => PREC_CMP,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.prec();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            BoolTerm::Cmp(op, l, r) => {
                l.fmt_prec(f, 0)?;
                write!(f, " {} ", op.symbol())?;
                r.fmt_prec(f, 0)?;
            }
            BoolTerm::And(l, r) => {
                l.fmt_prec(f, prec)?;
                write!(f, " && ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            BoolTerm::Or(l, r) => {
                l.fmt_prec(f, prec)?;
                write!(f, " || ")?;
                r.fmt_prec(f, prec + 1)?;
            }
            BoolTerm::Not(t) => {
                write!(f, "not ")?;
                t.fmt_prec(f, PREC_NOT)?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for BoolTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Int(t) => t.fmt(f),
            Term::List(t) => t.fmt(f),
            Term::Bool(t) => t.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    #[test]
    fn varname_rules() {
        assert!(Varname::new("x").is_ok());
        assert!(Varname::new("x_1").is_ok());
        assert!(Varname::new("").is_err());
        assert!(Varname::new("1x").is_err());
        assert!(Varname::new("a b").is_err());
        assert!(Varname::new("loop").is_err());
    }

    #[test]
    fn sum_over_history() {
        let mut env = Environment::new();
        env.bind(var("x"));
        env.push(&var("x"), 1).unwrap();
        env.push(&var("x"), 5).unwrap();
        assert_eq!(IntTerm::sum_of(var("x")).eval(&env), Ok(6));
    }

    #[test]
    fn empty_aggregates() {
        let mut env = Environment::new();
        env.bind(var("x"));
        assert_eq!(IntTerm::sum_of(var("x")).eval(&env), Ok(0));
        assert_eq!(IntTerm::product_of(var("x")).eval(&env), Ok(1));
        assert_eq!(IntTerm::length_of(var("x")).eval(&env), Ok(0));
    }

    #[test]
    fn length_against_current() {
        // len(all(x)) == curr(n) with x: [] and n: [0]
        let mut env = Environment::new();
        env.bind(var("x"));
        env.bind(var("n"));
        env.push(&var("n"), 0).unwrap();
        let t = BoolTerm::cmp(
            CmpOp::Eq,
            IntTerm::length_of(var("x")),
            IntTerm::current(var("n")),
        );
        assert_eq!(t.eval(&env), Ok(true));
    }

    #[test]
    fn current_is_last_element() {
        let mut env = Environment::new();
        env.bind(var("x"));
        env.push(&var("x"), 3).unwrap();
        env.push(&var("x"), 7).unwrap();
        assert_eq!(IntTerm::current(var("x")).eval(&env), Ok(7));
    }

    #[test]
    fn current_on_empty_history_fails() {
        let mut env = Environment::new();
        env.bind(var("x"));
        assert_eq!(
            IntTerm::current(var("x")).eval(&env),
            Err(EvalError::EmptyHistory(var("x")))
        );
    }

    #[test]
    fn unbound_variable_fails() {
        let env = Environment::new();
        assert_eq!(
            IntTerm::current(var("z")).eval(&env),
            Err(EvalError::UnboundVariable(var("z")))
        );
        assert_eq!(
            ListTerm::All(var("z")).eval(&env),
            Err(EvalError::UnboundVariable(var("z")))
        );
    }

    #[test]
    fn overflow_is_detected() {
        let t = IntTerm::mul(IntTerm::lit(i64::MAX), IntTerm::lit(2));
        assert_eq!(t.eval(&Environment::new()), Err(EvalError::Overflow));
        let t = IntTerm::add(IntTerm::lit(i64::MAX), IntTerm::lit(1));
        assert_eq!(t.eval(&Environment::new()), Err(EvalError::Overflow));
    }

    #[test]
    fn display_minimal_parens() {
        let a = || IntTerm::current(var("a"));
        let b = || IntTerm::current(var("b"));
        let c = || IntTerm::current(var("c"));
        // left-nested prints flat, right-nested keeps parens
        assert_eq!(
            IntTerm::add(IntTerm::add(a(), b()), c()).to_string(),
            "curr(a) + curr(b) + curr(c)"
        );
        assert_eq!(
            IntTerm::add(a(), IntTerm::add(b(), c())).to_string(),
            "curr(a) + (curr(b) + curr(c))"
        );
        assert_eq!(
            IntTerm::mul(IntTerm::add(a(), b()), c()).to_string(),
            "(curr(a) + curr(b)) * curr(c)"
        );
        assert_eq!(
            IntTerm::add(a(), IntTerm::mul(b(), c())).to_string(),
            "curr(a) + curr(b) * curr(c)"
        );
        let cmp = BoolTerm::cmp(CmpOp::Eq, IntTerm::length_of(var("x")), a());
        assert_eq!(cmp.to_string(), "len(all(x)) == curr(a)");
        let and_or = BoolTerm::and(
            BoolTerm::cmp(CmpOp::Lt, a(), b()),
            BoolTerm::or(
                BoolTerm::cmp(CmpOp::Eq, a(), b()),
                BoolTerm::cmp(CmpOp::Gt, b(), c()),
            ),
        );
        assert_eq!(
            and_or.to_string(),
            "curr(a) < curr(b) && (curr(a) == curr(b) || curr(b) > curr(c))"
        );
        let not = BoolTerm::negate(BoolTerm::and(
            BoolTerm::cmp(CmpOp::Eq, a(), b()),
            BoolTerm::cmp(CmpOp::Eq, b(), c()),
        ));
        assert_eq!(
            not.to_string(),
            "not (curr(a) == curr(b) && curr(b) == curr(c))"
        );
    }
}
