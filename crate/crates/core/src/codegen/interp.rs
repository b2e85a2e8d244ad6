//! Direct interpretation of the IR, producing the same trace format as the
//! specification interpreter.

use std::collections::HashMap;

use crate::semantics::{Event, InterpretError, Limits, Trace};
use crate::spec::{EvalError, Varname};

use super::ir::{IrExpr, IrStmt, PrintPiece, ProgramIr};

#[derive(Debug, Clone, PartialEq, Eq)]
enum IrValue {
    Int(i64),
    List(Vec<i64>),
    Bool(bool),
}

struct Machine<'a> {
    scalars: HashMap<String, i64>,
    lists: HashMap<String, Vec<i64>>,
    feed: &'a [i64],
    pos: usize,
    events: Vec<Event>,
    limits: &'a Limits,
}

enum Flow {
    Normal,
    Break,
}

/// Runs the program on the feed. Reads consume feed values in order;
/// prints emit rendered lines; loops are guarded by the same limits as
/// specification interpretation.
///
/// IR from [`super::lower_to_ir`] is always well-typed. Hand-built IR must
/// keep scalar, sequence and boolean positions straight; kind confusion
/// panics.
pub fn interpret_ir(
    ir: &ProgramIr,
    feed: &[i64],
    limits: &Limits,
) -> Result<Trace, InterpretError> {
    let mut m = Machine {
        scalars: HashMap::new(),
        lists: HashMap::new(),
        feed,
        pos: 0,
        events: Vec::new(),
        limits,
    };
    match m.exec_block(&ir.body)? {
        Flow::Normal | Flow::Break => {}
    }
    Ok(Trace::new(m.events, true))
}

impl Machine<'_> {
    fn exec_block(&mut self, stmts: &[IrStmt]) -> Result<Flow, InterpretError> {
        for stmt in stmts {
            match stmt {
                IrStmt::ReadInto(var) => {
                    let value = *self
                        .feed
                        .get(self.pos)
                        .ok_or(InterpretError::InputsExhausted)?;
                    self.pos += 1;
                    self.scalars.insert(var.clone(), value);
                    self.push_event(Event::In(value))?;
                }
                IrStmt::Print(pieces) => {
                    let mut line = String::new();
                    for piece in pieces {
                        match piece {
                            PrintPiece::Text(t) => line.push_str(t),
                            PrintPiece::Expr(e) => match self.eval(e)? {
                                IrValue::Int(n) => line.push_str(&n.to_string()),
                                IrValue::List(xs) => {
                                    line.push('[');
                                    for (i, x) in xs.iter().enumerate() {
                                        if i > 0 {
                                            line.push(',');
                                        }
                                        line.push_str(&x.to_string());
                                    }
                                    line.push(']');
                                }
                                IrValue::Bool(b) => line.push_str(if b { "True" } else { "False" }),
                            },
                        }
                    }
                    self.push_event(Event::Out(line))?;
                }
                IrStmt::Assign(var, expr) => match self.eval(expr)? {
                    IrValue::Int(n) => {
                        self.scalars.insert(var.clone(), n);
                    }
                    IrValue::List(xs) => {
                        self.lists.insert(var.clone(), xs);
                    }
                    IrValue::Bool(_) => panic!("boolean assignment to {var}"),
                },
                IrStmt::If {
                    cond,
                    then_body,
                    else_body,
                } => {
                    let branch = match self.eval(cond)? {
                        IrValue::Bool(b) => b,
                        other => panic!("non-boolean condition value {other:?}"),
                    };
                    let body = if branch { then_body } else { else_body };
                    if let Flow::Break = self.exec_block(body)? {
                        return Ok(Flow::Break);
                    }
                }
                IrStmt::Loop(body) => {
                    let mut iterations = 0u32;
                    loop {
                        iterations += 1;
                        if iterations > self.limits.max_loop_iterations {
                            return Err(InterpretError::LoopLimitExceeded);
                        }
                        if let Flow::Break = self.exec_block(body)? {
                            break;
                        }
                    }
                }
                IrStmt::Break => return Ok(Flow::Break),
            }
        }
        Ok(Flow::Normal)
    }

    fn push_event(&mut self, e: Event) -> Result<(), InterpretError> {
        if self.events.len() as u32 >= self.limits.max_trace_events {
            return Err(InterpretError::TraceLimitExceeded);
        }
        self.events.push(e);
        Ok(())
    }

    fn eval(&self, expr: &IrExpr) -> Result<IrValue, InterpretError> {
        let int = |v: IrValue| match v {
            IrValue::Int(n) => n,
            other => panic!("expected integer value, got {other:?}"),
        };
        let overflow = || InterpretError::Eval(EvalError::Overflow);
        Ok(match expr {
            IrExpr::Var(v) => {
                IrValue::Int(*self.scalars.get(v).ok_or_else(|| {
                    InterpretError::Eval(EvalError::UnboundVariable(ir_varname(v)))
                })?)
            }
            IrExpr::Lit(n) => IrValue::Int(*n),
            IrExpr::Add(l, r) => IrValue::Int(
                int(self.eval(l)?)
                    .checked_add(int(self.eval(r)?))
                    .ok_or_else(overflow)?,
            ),
            IrExpr::Sub(l, r) => IrValue::Int(
                int(self.eval(l)?)
                    .checked_sub(int(self.eval(r)?))
                    .ok_or_else(overflow)?,
            ),
            IrExpr::Mul(l, r) => IrValue::Int(
                int(self.eval(l)?)
                    .checked_mul(int(self.eval(r)?))
                    .ok_or_else(overflow)?,
            ),
            IrExpr::SumOf(v) => IrValue::Int(
                self.list(v)?
                    .iter()
                    .try_fold(0i64, |acc, &x| acc.checked_add(x))
                    .ok_or_else(overflow)?,
            ),
            IrExpr::ProdOf(v) => IrValue::Int(
                self.list(v)?
                    .iter()
                    .try_fold(1i64, |acc, &x| acc.checked_mul(x))
                    .ok_or_else(overflow)?,
            ),
            IrExpr::LenOf(v) => IrValue::Int(self.list(v)?.len() as i64),
            IrExpr::LastOf(v) => IrValue::Int(
                *self
                    .list(v)?
                    .last()
                    .ok_or_else(|| InterpretError::Eval(EvalError::EmptyHistory(ir_varname(v))))?,
            ),
            IrExpr::ListVar(v) => IrValue::List(self.list(v)?.clone()),
            IrExpr::EmptyList => IrValue::List(vec![]),
            IrExpr::Append(v, e) => {
                let mut xs = self.list(v)?.clone();
                xs.push(int(self.eval(e)?));
                IrValue::List(xs)
            }
            IrExpr::Cmp(op, l, r) => {
                IrValue::Bool(op.apply(int(self.eval(l)?), int(self.eval(r)?)))
            }
            IrExpr::And(l, r) => IrValue::Bool(self.truth(l)? && self.truth(r)?),
            IrExpr::Or(l, r) => IrValue::Bool(self.truth(l)? || self.truth(r)?),
            IrExpr::Not(e) => IrValue::Bool(!self.truth(e)?),
        })
    }

    fn truth(&self, e: &IrExpr) -> Result<bool, InterpretError> {
        match self.eval(e)? {
            IrValue::Bool(b) => Ok(b),
            other => panic!("expected boolean value, got {other:?}"),
        }
    }

    fn list(&self, v: &str) -> Result<&Vec<i64>, InterpretError> {
        self.lists
            .get(v)
            .ok_or_else(|| InterpretError::Eval(EvalError::UnboundVariable(ir_varname(v))))
    }
}

fn ir_varname(name: &str) -> Varname {
    Varname::new(name).unwrap_or_else(|_| Varname::new("ir_internal").unwrap())
}
