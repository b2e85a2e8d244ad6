//! Surface renderers: program text in a Haskell-like and a Python-like
//! syntax, with optional hole punching.
//!
//! Rendered programs are text artifacts; they are never compiled or
//! executed. Execution goes through the IR interpreter or the external
//! harness. Randomness only affects cosmetic choices (the loop helper name
//! and the scratch read variable in the Haskell surface); semantics and the
//! Python surface are seed-invariant.

use std::collections::HashMap;

use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::spec::CmpOp;

use super::ir::{IrExpr, IrStmt, PrintPiece, ProgramIr};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Surface {
    HaskellLike,
    PythonLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HolePolicy {
    NoHoles,
    /// Replace every read and print call with `???`.
    ReadsAndPrints,
    /// Replace the body of each outermost loop with `???`.
    LoopBody,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderTarget {
    pub surface: Surface,
    pub holes: HolePolicy,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("the program has no construct matching the hole policy")]
    NoHolableConstruct,
}

/// A rendering with holes, together with the text each hole replaced.
/// Substituting `omitted[i]` for the i-th `???` occurrence restores the
/// hole-free rendering byte for byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoledProgram {
    pub text: String,
    pub omitted: Vec<String>,
}

pub const HOLE: &str = "???";

/// Renders complete program text. The seed only varies cosmetic naming.
pub fn render_program(ir: &ProgramIr, target: &RenderTarget, rng: &mut ChaCha12Rng) -> String {
    let (text, _) = render(ir, target.surface, HolePolicy::NoHoles, rng);
    text
}

/// Renders with the target's hole policy applied.
pub fn render_with_holes(
    ir: &ProgramIr,
    target: &RenderTarget,
    rng: &mut ChaCha12Rng,
) -> Result<HoledProgram, RenderError> {
    match target.holes {
        HolePolicy::NoHoles => Err(RenderError::NoHolableConstruct),
        HolePolicy::ReadsAndPrints if ir.count_reads_and_prints() == 0 => {
            Err(RenderError::NoHolableConstruct)
        }
        HolePolicy::LoopBody if !ir.contains_loop() => Err(RenderError::NoHolableConstruct),
        policy => {
            let (text, omitted) = render(ir, target.surface, policy, rng);
            Ok(HoledProgram { text, omitted })
        }
    }
}

fn render(
    ir: &ProgramIr,
    surface: Surface,
    policy: HolePolicy,
    rng: &mut ChaCha12Rng,
) -> (String, Vec<String>) {
    match surface {
        Surface::PythonLike => PythonRenderer::render(ir, policy),
        Surface::HaskellLike => HaskellRenderer::render(ir, policy, rng),
    }
}

fn indent_of(level: usize) -> String {
    "  ".repeat(level)
}

/// Strips the shared leading indent of a block's first line, so the block
/// can replace a `???` written at that indent.
fn block_fragment(lines: &[String], level: usize) -> String {
    let mut text = lines.join("\n");
    let prefix = indent_of(level);
    if let Some(rest) = text.strip_prefix(&prefix) {
        text = rest.to_string();
    }
    text
}

// ---------------------------------------------------------------------
// Python-like surface
// ---------------------------------------------------------------------

struct PythonRenderer {
    lines: Vec<String>,
    omitted: Vec<String>,
    policy: HolePolicy,
}

impl PythonRenderer {
    fn render(ir: &ProgramIr, policy: HolePolicy) -> (String, Vec<String>) {
        let mut r = PythonRenderer {
            lines: Vec::new(),
            omitted: Vec::new(),
            policy,
        };
        if uses_prod(&ir.body) {
            r.lines.push("import math".to_string());
        }
        if ir.body.is_empty() {
            r.lines.push("pass".to_string());
        } else {
            r.stmts(&ir.body, 0);
        }
        (r.lines.join("\n") + "\n", r.omitted)
    }

    fn push(&mut self, level: usize, line: String) {
        self.lines.push(format!("{}{line}", indent_of(level)));
    }

    fn stmts(&mut self, stmts: &[IrStmt], level: usize) {
        let mut i = 0;
        while i < stmts.len() {
            match &stmts[i] {
                IrStmt::ReadInto(v) => {
                    if self.policy == HolePolicy::ReadsAndPrints {
                        self.push(level, format!("{v} = {HOLE}"));
                        self.omitted.push("int(input())".to_string());
                    } else {
                        self.push(level, format!("{v} = int(input())"));
                    }
                }
                IrStmt::Print(pieces) => {
                    let stmt = print_stmt_python(pieces);
                    if self.policy == HolePolicy::ReadsAndPrints {
                        self.push(level, HOLE.to_string());
                        self.omitted.push(stmt);
                    } else {
                        self.push(level, stmt);
                    }
                }
                IrStmt::Assign(v, IrExpr::Append(src, e)) if v == src => {
                    self.push(level, format!("{v} += [{}]", py_expr(e, 0)));
                }
                IrStmt::Assign(v, e) => {
                    self.push(level, format!("{v} = {}", py_expr(e, 0)));
                }
                IrStmt::If {
                    cond,
                    then_body,
                    else_body,
                } => {
                    if then_body.as_slice() == [IrStmt::Break] {
                        // `if c : break` and fall through; the break makes
                        // an explicit else redundant.
                        self.push(level, format!("if {} :", py_expr(cond, 0)));
                        self.push(level + 1, "break".to_string());
                        self.stmts(else_body, level);
                    } else {
                        self.push(level, format!("if {} :", py_expr(cond, 0)));
                        self.block(then_body, level + 1);
                        if !else_body.is_empty() {
                            self.push(level, "else :".to_string());
                            self.block(else_body, level + 1);
                        }
                    }
                }
                IrStmt::Loop(body) => self.render_loop(body, level),
                IrStmt::Break => self.push(level, "break".to_string()),
            }
            i += 1;
        }
    }

    fn block(&mut self, stmts: &[IrStmt], level: usize) {
        if stmts.is_empty() {
            self.push(level, "pass".to_string());
        } else {
            self.stmts(stmts, level);
        }
    }

    fn render_loop(&mut self, body: &[IrStmt], level: usize) {
        // A loop headed by `if c: break else: rest` renders as a while
        // loop over the negated condition.
        let (head, rest) = match body.first() {
            Some(IrStmt::If {
                cond,
                then_body,
                else_body,
            }) if then_body.as_slice() == [IrStmt::Break] => {
                let mut rest = else_body.clone();
                rest.extend_from_slice(&body[1..]);
                (
                    format!("while {} :", py_expr(&cond.clone().negated(), 0)),
                    rest,
                )
            }
            _ => ("while True :".to_string(), body.to_vec()),
        };
        self.push(level, head);
        if self.policy == HolePolicy::LoopBody {
            let mut sub = PythonRenderer {
                lines: Vec::new(),
                omitted: Vec::new(),
                policy: HolePolicy::NoHoles,
            };
            sub.block(&rest, level + 1);
            self.push(level + 1, HOLE.to_string());
            self.omitted.push(block_fragment(&sub.lines, level + 1));
        } else {
            self.block(&rest, level + 1);
        }
    }
}

fn uses_prod(stmts: &[IrStmt]) -> bool {
    fn expr_uses(e: &IrExpr) -> bool {
        match e {
            IrExpr::ProdOf(_) => true,
            IrExpr::Add(l, r)
            | IrExpr::Sub(l, r)
            | IrExpr::Mul(l, r)
            | IrExpr::Cmp(_, l, r)
            | IrExpr::And(l, r)
            | IrExpr::Or(l, r) => expr_uses(l) || expr_uses(r),
            IrExpr::Not(x) => expr_uses(x),
            IrExpr::Append(_, e) => expr_uses(e),
            _ => false,
        }
    }
    stmts.iter().any(|s| match s {
        IrStmt::Assign(_, e) => expr_uses(e),
        IrStmt::Print(pieces) => pieces.iter().any(|p| match p {
            PrintPiece::Expr(e) => expr_uses(e),
            PrintPiece::Text(_) => false,
        }),
        IrStmt::If {
            cond,
            then_body,
            else_body,
        } => expr_uses(cond) || uses_prod(then_body) || uses_prod(else_body),
        IrStmt::Loop(body) => uses_prod(body),
        _ => false,
    })
}

fn print_stmt_python(pieces: &[PrintPiece]) -> String {
    match pieces {
        [PrintPiece::Expr(e)] => format!("print({})", py_expr(e, 0)),
        [PrintPiece::Text(t)] => format!("print(\"{t}\")"),
        _ => {
            let parts: Vec<String> = pieces
                .iter()
                .map(|p| match p {
                    PrintPiece::Text(t) => format!("\"{t}\""),
                    PrintPiece::Expr(e) => format!("str({})", py_expr(e, 0)),
                })
                .collect();
            format!("print({})", parts.join(" + "))
        }
    }
}

// Precedence levels shared by both surfaces: or(1) < and(2) < not(3) <
// cmp(4) < add(5) < mul(6) < atom(7).

fn py_cmp_op(op: CmpOp) -> &'static str {
    match op {
        CmpOp::Neq => "!=",
        other => other.symbol(),
    }
}

fn py_expr(e: &IrExpr, min_prec: u8) -> String {
    let (text, prec) = match e {
        IrExpr::Var(v) => (v.clone(), 7),
        IrExpr::Lit(n) => (n.to_string(), if *n < 0 { 6 } else { 7 }),
        IrExpr::Add(l, r) => (format!("{} + {}", py_expr(l, 5), py_expr(r, 6)), 5),
        IrExpr::Sub(l, r) => (format!("{} - {}", py_expr(l, 5), py_expr(r, 6)), 5),
        IrExpr::Mul(l, r) => (format!("{} * {}", py_expr(l, 6), py_expr(r, 7)), 6),
        IrExpr::SumOf(v) => (format!("sum({v})"), 7),
        IrExpr::ProdOf(v) => (format!("math.prod({v})"), 7),
        IrExpr::LenOf(v) => (format!("len({v})"), 7),
        IrExpr::LastOf(v) => (format!("{v}[-1]"), 7),
        IrExpr::ListVar(v) => (v.clone(), 7),
        IrExpr::EmptyList => ("[]".to_string(), 7),
        IrExpr::Append(v, e) => (format!("{v} + [{}]", py_expr(e, 0)), 5),
        IrExpr::Cmp(op, l, r) => (
            format!("{} {} {}", py_expr(l, 5), py_cmp_op(*op), py_expr(r, 5)),
            4,
        ),
        IrExpr::And(l, r) => (format!("{} and {}", py_expr(l, 2), py_expr(r, 3)), 2),
        IrExpr::Or(l, r) => (format!("{} or {}", py_expr(l, 1), py_expr(r, 2)), 1),
        IrExpr::Not(x) => (format!("not {}", py_expr(x, 3)), 3),
    };
    if prec < min_prec {
        format!("({text})")
    } else {
        text
    }
}

// ---------------------------------------------------------------------
// Haskell-like surface
// ---------------------------------------------------------------------

const HELPER_POOL: [&str; 3] = ["loop", "go", "aux"];
const TMP_RENAME_POOL: [&str; 3] = ["v", "w", "u"];

/// What a statement list falls through into.
enum Tail<'a> {
    /// End of the program (or of a standalone branch).
    Stop,
    /// End of a loop body: recurse with the updated state.
    Recurse { helper: String, state: &'a [String] },
}

/// Break continuation: the statements after the enclosing loop, with that
/// level's own tail and break continuation.
struct BreakCont<'a> {
    rest: &'a [IrStmt],
    tail: &'a Tail<'a>,
    outer: Option<&'a BreakCont<'a>>,
}

type Pending = HashMap<String, String>;

struct HaskellRenderer {
    lines: Vec<String>,
    omitted: Vec<String>,
    policy: HolePolicy,
    rename: HashMap<String, String>,
    helper_pool: Vec<String>,
}

impl HaskellRenderer {
    fn render(ir: &ProgramIr, policy: HolePolicy, rng: &mut ChaCha12Rng) -> (String, Vec<String>) {
        // Cosmetic choices, drawn up front in a fixed order so the body
        // renders deterministically: a variable naming scheme, a
        // helper-name ordering, and (under the as-is scheme) a
        // scratch-variable rename.
        let numbered_scheme = rng.random_bool(0.5);

        let mut helper_pool: Vec<String> = HELPER_POOL.iter().map(|s| s.to_string()).collect();
        let first = *HELPER_POOL.choose(rng).unwrap();
        helper_pool.retain(|h| h != first);
        helper_pool.insert(0, first.to_string());

        let mut rename = HashMap::new();
        if numbered_scheme {
            // Rename program variables to v1, v2, ... in binding order;
            // fold accumulators keep their meaningful names.
            let state_names: Vec<&String> = ir.state.iter().map(|s| &s.name).collect();
            let mut next = 1;
            for v in ir.var_names() {
                if state_names.contains(&v) {
                    continue;
                }
                rename.insert(v.clone(), format!("v{next}"));
                next += 1;
            }
        } else if let Some(tmp) = &ir.tmp_var {
            let taken: Vec<&String> = ir.var_names().collect();
            let candidates: Vec<String> = TMP_RENAME_POOL
                .iter()
                .map(|s| s.to_string())
                .filter(|c| c == tmp || !taken.contains(&c))
                .collect();
            if let Some(choice) = candidates.choose(rng) {
                if choice != tmp {
                    rename.insert(tmp.clone(), choice.clone());
                }
            }
        }

        let mut r = HaskellRenderer {
            lines: vec!["main :: IO ()".to_string()],
            omitted: Vec::new(),
            policy,
            rename,
            helper_pool,
        };
        if ir.body.is_empty() {
            r.lines.push("main = return ()".to_string());
        } else {
            r.lines.push("main = do".to_string());
            let mut pending = Pending::new();
            r.stmts(&ir.body, &mut pending, 1, &Tail::Stop, None);
        }
        (r.lines.join("\n") + "\n", r.omitted)
    }

    fn push(&mut self, level: usize, line: String) {
        self.lines.push(format!("{}{line}", indent_of(level)));
    }

    fn name<'n>(&'n self, v: &'n str) -> &'n str {
        self.rename.get(v).map(String::as_str).unwrap_or(v)
    }

    /// Renders a statement list. Returns the number of lines emitted for
    /// this block.
    fn stmts(
        &mut self,
        stmts: &[IrStmt],
        pending: &mut Pending,
        level: usize,
        tail: &Tail,
        brk: Option<&BreakCont>,
    ) -> usize {
        let before = self.lines.len();
        let mut i = 0;
        while i < stmts.len() {
            match &stmts[i] {
                IrStmt::ReadInto(v) => {
                    let name = self.name(v).to_string();
                    pending.remove(v);
                    if self.policy == HolePolicy::ReadsAndPrints {
                        self.push(level, format!("{name} <- {HOLE}"));
                        self.omitted.push("readLn".to_string());
                    } else {
                        self.push(level, format!("{name} <- readLn"));
                    }
                }
                IrStmt::Print(pieces) => {
                    let stmt = self.print_stmt(pieces, pending);
                    if self.policy == HolePolicy::ReadsAndPrints {
                        self.push(level, HOLE.to_string());
                        self.omitted.push(stmt);
                    } else {
                        self.push(level, stmt);
                    }
                }
                IrStmt::Assign(v, e) => {
                    // Assignments never emit text: the updated value is
                    // substituted into later expressions and recursion
                    // arguments.
                    let rendered = self.expr(e, pending, 0);
                    pending.insert(v.clone(), rendered);
                }
                IrStmt::If {
                    cond,
                    then_body,
                    else_body,
                } => {
                    let rest = &stmts[i + 1..];
                    if rest.is_empty() {
                        // Tail position: the branches carry the tail.
                        self.render_if(cond, then_body, else_body, pending, level, tail, brk);
                        return self.lines.len() - before;
                    } else if branch_transfers(then_body) || branch_transfers(else_body) {
                        // A transferring branch cannot fall through to the
                        // rest, so the rest moves into both branches.
                        let then_ext = concat_stmts(then_body, rest);
                        let else_ext = concat_stmts(else_body, rest);
                        self.render_if(cond, &then_ext, &else_ext, pending, level, tail, brk);
                        return self.lines.len() - before;
                    } else {
                        // Side-effect-only branches render as a plain
                        // statement and execution continues below.
                        self.render_if(
                            cond,
                            then_body,
                            else_body,
                            pending,
                            level,
                            &Tail::Stop,
                            None,
                        );
                    }
                }
                IrStmt::Loop(body) => {
                    let rest = &stmts[i + 1..];
                    self.render_loop(body, rest, pending, level, tail, brk);
                    return self.lines.len() - before;
                }
                IrStmt::Break => {
                    let cont = brk.expect("break outside loop in IR");
                    self.stmts(cont.rest, pending, level, cont.tail, cont.outer);
                    return self.lines.len() - before;
                }
            }
            i += 1;
        }
        self.render_tail(tail, pending, level, self.lines.len() - before);
        self.lines.len() - before
    }

    fn render_tail(&mut self, tail: &Tail, pending: &Pending, level: usize, emitted: usize) {
        match tail {
            Tail::Stop => {
                if emitted == 0 {
                    self.push(level, "return ()".to_string());
                }
            }
            Tail::Recurse { helper, state } => {
                let args: Vec<String> = state
                    .iter()
                    .map(|v| {
                        let value = pending
                            .get(v)
                            .cloned()
                            .unwrap_or_else(|| self.name(v).to_string());
                        paren_arg(&value)
                    })
                    .collect();
                self.push(
                    level,
                    format!("{helper} {}", args.join(" "))
                        .trim_end()
                        .to_string(),
                );
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn render_if(
        &mut self,
        cond: &IrExpr,
        then_body: &[IrStmt],
        else_body: &[IrStmt],
        pending: &mut Pending,
        level: usize,
        tail: &Tail,
        brk: Option<&BreakCont>,
    ) {
        let cond_text = self.expr(cond, pending, 0);
        self.push(level, format!("if {cond_text}"));
        self.render_branch("then", then_body, pending, level + 1, tail, brk);
        self.render_branch("else", else_body, pending, level + 1, tail, brk);
    }

    fn render_branch(
        &mut self,
        keyword: &str,
        body: &[IrStmt],
        pending: &Pending,
        level: usize,
        tail: &Tail,
        brk: Option<&BreakCont>,
    ) {
        // Render into place, then patch the branch keyword in. Single-line
        // branches inline after the keyword; longer ones get a do block.
        let marker = self.lines.len();
        self.push(level, keyword.to_string());
        let mut branch_pending = pending.clone();
        let emitted = self.stmts(body, &mut branch_pending, level + 1, tail, brk);
        debug_assert!(emitted > 0, "branch rendered no lines");
        if emitted == 1 {
            let line = self.lines.remove(marker + 1);
            self.lines[marker] = format!("{}{keyword} {}", indent_of(level), line.trim_start());
        } else {
            self.lines[marker] = format!("{}{keyword} do", indent_of(level));
        }
    }

    fn render_loop(
        &mut self,
        body: &[IrStmt],
        rest: &[IrStmt],
        pending: &mut Pending,
        level: usize,
        tail: &Tail,
        brk: Option<&BreakCont>,
    ) {
        let state = super::ir::ProgramIr::assigned_vars(body);
        let helper = if self.helper_pool.is_empty() {
            format!("go{level}")
        } else {
            self.helper_pool.remove(0)
        };
        let params: Vec<String> = state.iter().map(|v| self.name(v).to_string()).collect();
        // The body is a do block; a single trailing expression under `do`
        // is still valid.
        let header = if params.is_empty() {
            format!("let {helper} = do")
        } else {
            format!("let {helper} {} = do", params.join(" "))
        };
        self.push(level, header);

        // Entry arguments capture the state values pending at loop entry;
        // inside the body the parameters are fresh bindings.
        let entry_args: Vec<String> = state
            .iter()
            .map(|v| {
                let value = pending
                    .get(v)
                    .cloned()
                    .unwrap_or_else(|| self.name(v).to_string());
                paren_arg(&value)
            })
            .collect();
        let mut body_pending = pending.clone();
        for v in &state {
            body_pending.remove(v);
        }

        let inner_tail = Tail::Recurse {
            helper: helper.clone(),
            state: &state,
        };
        let cont = BreakCont {
            rest,
            tail,
            outer: brk,
        };
        if self.policy == HolePolicy::LoopBody {
            let saved_policy = self.policy;
            self.policy = HolePolicy::NoHoles;
            let marker = self.lines.len();
            self.stmts(body, &mut body_pending, level + 3, &inner_tail, Some(&cont));
            let body_lines: Vec<String> = self.lines.drain(marker..).collect();
            self.policy = saved_policy;
            self.push(level + 3, HOLE.to_string());
            self.omitted.push(block_fragment(&body_lines, level + 3));
        } else {
            self.stmts(body, &mut body_pending, level + 3, &inner_tail, Some(&cont));
        }

        let entry = format!("{helper} {}", entry_args.join(" "));
        self.push(level, entry.trim_end().to_string());
    }

    fn print_stmt(&self, pieces: &[PrintPiece], pending: &Pending) -> String {
        match pieces {
            [PrintPiece::Expr(e)] => format!("print {}", paren_arg(&self.expr(e, pending, 0))),
            [PrintPiece::Text(t)] => format!("putStrLn \"{t}\""),
            _ => {
                let parts: Vec<String> = pieces
                    .iter()
                    .map(|p| match p {
                        PrintPiece::Text(t) => format!("\"{t}\""),
                        PrintPiece::Expr(e) => {
                            format!("show {}", paren_arg(&self.expr(e, pending, 0)))
                        }
                    })
                    .collect();
                format!("putStrLn ({})", parts.join(" ++ "))
            }
        }
    }

    fn expr(&self, e: &IrExpr, pending: &Pending, min_prec: u8) -> String {
        let (text, prec) = match e {
            IrExpr::Var(v) => match pending.get(v) {
                Some(value) => (value.clone(), value_prec(value)),
                None => (self.name(v).to_string(), 7),
            },
            IrExpr::Lit(n) => (n.to_string(), if *n < 0 { 0 } else { 7 }),
            IrExpr::Add(l, r) => (
                format!(
                    "{} + {}",
                    self.expr(l, pending, 5),
                    self.expr(r, pending, 6)
                ),
                5,
            ),
            IrExpr::Sub(l, r) => (
                format!(
                    "{} - {}",
                    self.expr(l, pending, 5),
                    self.expr(r, pending, 6)
                ),
                5,
            ),
            IrExpr::Mul(l, r) => (
                format!(
                    "{} * {}",
                    self.expr(l, pending, 6),
                    self.expr(r, pending, 7)
                ),
                6,
            ),
            IrExpr::SumOf(v) => (format!("sum {}", self.list_arg(v, pending)), 6),
            IrExpr::ProdOf(v) => (format!("product {}", self.list_arg(v, pending)), 6),
            IrExpr::LenOf(v) => (format!("length {}", self.list_arg(v, pending)), 6),
            IrExpr::LastOf(v) => (format!("last {}", self.list_arg(v, pending)), 6),
            IrExpr::ListVar(v) => match pending.get(v) {
                Some(value) => (value.clone(), value_prec(value)),
                None => (self.name(v).to_string(), 7),
            },
            IrExpr::EmptyList => ("[]".to_string(), 7),
            IrExpr::Append(v, e) => {
                let base = match pending.get(v) {
                    Some(value) => paren_arg(value),
                    None => self.name(v).to_string(),
                };
                (format!("{base} ++ [{}]", self.expr(e, pending, 0)), 5)
            }
            IrExpr::Cmp(op, l, r) => (
                format!(
                    "{} {} {}",
                    self.expr(l, pending, 5),
                    op.symbol(),
                    self.expr(r, pending, 5)
                ),
                4,
            ),
            IrExpr::And(l, r) => (
                format!(
                    "{} && {}",
                    self.expr(l, pending, 2),
                    self.expr(r, pending, 3)
                ),
                2,
            ),
            IrExpr::Or(l, r) => (
                format!(
                    "{} || {}",
                    self.expr(l, pending, 1),
                    self.expr(r, pending, 2)
                ),
                1,
            ),
            IrExpr::Not(x) => (format!("not {}", paren_arg(&self.expr(x, pending, 7))), 3),
        };
        if prec < min_prec {
            format!("({text})")
        } else {
            text
        }
    }

    fn list_arg(&self, v: &str, pending: &Pending) -> String {
        match pending.get(v) {
            Some(value) => paren_arg(value),
            None => self.name(v).to_string(),
        }
    }
}

/// True when execution cannot fall out of the bottom of the block (it
/// breaks out of a loop) or when the block rebinds state, which a
/// statement-position rendering could not express.
fn branch_transfers(stmts: &[IrStmt]) -> bool {
    stmts.iter().any(|s| match s {
        IrStmt::Break | IrStmt::Assign(..) | IrStmt::Loop(_) => true,
        IrStmt::If {
            then_body,
            else_body,
            ..
        } => branch_transfers(then_body) || branch_transfers(else_body),
        _ => false,
    })
}

fn concat_stmts(a: &[IrStmt], b: &[IrStmt]) -> Vec<IrStmt> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out
}

/// Conservative precedence of an already rendered expression.
fn value_prec(value: &str) -> u8 {
    if value.contains(' ') || value.starts_with('-') {
        0
    } else {
        7
    }
}

/// True when the whole string is one parenthesized group, i.e. the opening
/// paren closes at the very end ("(a + b)" but not "(a + b) * (c + d)").
fn fully_parenthesized(value: &str) -> bool {
    if !(value.starts_with('(') && value.ends_with(')')) {
        return false;
    }
    let mut depth = 0usize;
    for (i, b) in value.bytes().enumerate() {
        match b {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth == 0 {
                    return i == value.len() - 1;
                }
            }
            _ => {}
        }
    }
    false
}

fn paren_arg(value: &str) -> String {
    if value_prec(value) < 7 && !fully_parenthesized(value) {
        format!("({value})")
    } else {
        value.to_string()
    }
}
