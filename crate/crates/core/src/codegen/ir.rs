//! The imperative intermediate representation specifications lower into.
//! The IR is renderable in several surface syntaxes and directly
//! interpretable.

use crate::spec::CmpOp;

/// Lowering style.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    /// Histories materialize as sequence variables; aggregates compute over
    /// the whole sequence at use sites.
    ListAccum,
    /// Aggregates become running accumulators updated at each read; no
    /// sequence-typed variable remains.
    FoldState,
}

/// A loop-carried accumulator with its start value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateVar {
    pub name: String,
    pub init: IrExpr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramIr {
    pub style: Style,
    pub body: Vec<IrStmt>,
    /// Accumulators introduced by fold-state lowering, in declaration
    /// order. Empty for list-accumulation programs.
    pub state: Vec<StateVar>,
    /// The scratch variable in-loop reads land in, when one exists. The
    /// Haskell renderer may rename it cosmetically.
    pub tmp_var: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrStmt {
    /// Read one integer from the console into a scalar variable.
    ReadInto(String),
    /// Write one output line assembled from the pieces.
    Print(Vec<PrintPiece>),
    Assign(String, IrExpr),
    If {
        cond: IrExpr,
        then_body: Vec<IrStmt>,
        else_body: Vec<IrStmt>,
    },
    /// Runs its body until a `Break` inside fires.
    Loop(Vec<IrStmt>),
    Break,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrintPiece {
    Text(String),
    Expr(IrExpr),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IrExpr {
    Var(String),
    Lit(i64),
    Add(Box<IrExpr>, Box<IrExpr>),
    Sub(Box<IrExpr>, Box<IrExpr>),
    Mul(Box<IrExpr>, Box<IrExpr>),
    /// Aggregates over a sequence variable (list-accumulation style only).
    SumOf(String),
    ProdOf(String),
    LenOf(String),
    /// Last element of a sequence variable.
    LastOf(String),
    /// The whole sequence variable.
    ListVar(String),
    EmptyList,
    /// `var ++ [elem]`
    Append(String, Box<IrExpr>),
    Cmp(CmpOp, Box<IrExpr>, Box<IrExpr>),
    And(Box<IrExpr>, Box<IrExpr>),
    Or(Box<IrExpr>, Box<IrExpr>),
    Not(Box<IrExpr>),
}

impl IrExpr {
    #[allow(clippy::should_implement_trait)]
    pub fn add(l: IrExpr, r: IrExpr) -> IrExpr {
        IrExpr::Add(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(l: IrExpr, r: IrExpr) -> IrExpr {
        IrExpr::Sub(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(l: IrExpr, r: IrExpr) -> IrExpr {
        IrExpr::Mul(Box::new(l), Box::new(r))
    }

    pub fn cmp(op: CmpOp, l: IrExpr, r: IrExpr) -> IrExpr {
        IrExpr::Cmp(op, Box::new(l), Box::new(r))
    }

    /// Negation, pushed into comparisons where possible so rendered loop
    /// conditions read naturally (`len(x) != n` rather than
    /// `not (len(x) == n)`).
    pub fn negated(self) -> IrExpr {
        match self {
            IrExpr::Cmp(op, l, r) => IrExpr::Cmp(op.negated(), l, r),
            IrExpr::Not(inner) => *inner,
            other => IrExpr::Not(Box::new(other)),
        }
    }
}

impl ProgramIr {
    /// Variables assigned anywhere in a statement list. Loops carry these
    /// as recursion state in the functional rendering.
    pub fn assigned_vars(stmts: &[IrStmt]) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        fn walk(stmts: &[IrStmt], out: &mut Vec<String>) {
            for s in stmts {
                match s {
                    IrStmt::Assign(v, _) => {
                        if !out.contains(v) {
                            out.push(v.clone());
                        }
                    }
                    IrStmt::If {
                        then_body,
                        else_body,
                        ..
                    } => {
                        walk(then_body, out);
                        walk(else_body, out);
                    }
                    IrStmt::Loop(body) => walk(body, out),
                    _ => {}
                }
            }
        }
        walk(stmts, &mut out);
        out
    }

    pub fn count_reads_and_prints(&self) -> usize {
        fn walk(stmts: &[IrStmt]) -> usize {
            stmts
                .iter()
                .map(|s| match s {
                    IrStmt::ReadInto(_) | IrStmt::Print(_) => 1,
                    IrStmt::If {
                        then_body,
                        else_body,
                        ..
                    } => walk(then_body) + walk(else_body),
                    IrStmt::Loop(body) => walk(body),
                    _ => 0,
                })
                .sum()
        }
        walk(&self.body)
    }

    pub fn contains_loop(&self) -> bool {
        fn walk(stmts: &[IrStmt]) -> bool {
            stmts.iter().any(|s| match s {
                IrStmt::Loop(_) => true,
                IrStmt::If {
                    then_body,
                    else_body,
                    ..
                } => walk(then_body) || walk(else_body),
                _ => false,
            })
        }
        walk(&self.body)
    }

    /// Every variable name the program binds (read targets and assignment
    /// targets).
    pub fn var_names(&self) -> impl Iterator<Item = &String> {
        fn collect<'a>(stmts: &'a [IrStmt], out: &mut Vec<&'a String>) {
            for s in stmts {
                match s {
                    IrStmt::ReadInto(v) | IrStmt::Assign(v, _) => {
                        if !out.contains(&v) {
                            out.push(v);
                        }
                    }
                    IrStmt::If {
                        then_body,
                        else_body,
                        ..
                    } => {
                        collect(then_body, out);
                        collect(else_body, out);
                    }
                    IrStmt::Loop(body) => collect(body, out),
                    _ => {}
                }
            }
        }
        let mut out = Vec::new();
        collect(&self.body, &mut out);
        out.into_iter()
    }
}
