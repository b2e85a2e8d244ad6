//! Lowering from specifications to the imperative IR, in either style.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::spec::{BoolTerm, IntTerm, ListTerm, OutputPattern, Segment, Spec, Term, Varname};

use super::ir::{IrExpr, IrStmt, PrintPiece, ProgramIr, StateVar, Style};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("fold-state lowering does not support the term {term}")]
pub struct StyleUnsupported {
    pub term: String,
}

/// Lowers a well-formed specification. List-accumulation succeeds for every
/// well-formed specification; fold-state requires every history use to fit
/// the fold catalog (sum, prod, len, curr) and rejects raw sequence splices.
pub fn lower_to_ir(spec: &Spec, style: Style) -> Result<ProgramIr, StyleUnsupported> {
    let spec = spec.clone().normalize();
    let table = analyze(&spec);
    match style {
        Style::ListAccum => Ok(lower_list_accum(&spec, &table)),
        Style::FoldState => lower_fold_state(&spec, &table),
    }
}

#[derive(Debug, Default, Clone)]
struct VarInfo {
    read_sites: usize,
    read_nested: bool,
    /// Earliest top-level statement that reads the variable.
    first_read_stmt: Option<usize>,
    /// Earliest top-level statement that reads or references it.
    first_event_stmt: Option<usize>,
    first_event_order: usize,
    needs_sum: bool,
    needs_prod: bool,
    needs_len: bool,
    needs_curr: bool,
    /// Referenced through `all(v)` in any way (aggregate or raw splice).
    history_used: bool,
    /// Earliest top-level statement with a term use.
    first_use_stmt: Option<usize>,
}

#[derive(Debug, Default)]
struct Analysis {
    vars: BTreeMap<Varname, VarInfo>,
    /// A raw sequence splice, if any; fold-state lowering refuses these.
    raw_list_use: Option<String>,
    event_counter: usize,
}

fn analyze(spec: &Spec) -> Analysis {
    let mut a = Analysis::default();
    for (idx, stmt) in spec.stmts().into_iter().enumerate() {
        scan_stmt(stmt, idx, false, &mut a);
    }
    a
}

fn scan_stmt(stmt: &Spec, idx: usize, nested: bool, a: &mut Analysis) {
    match stmt {
        Spec::Nop | Spec::Exit => {}
        Spec::Read(v, _) => {
            a.event_counter += 1;
            let order = a.event_counter;
            let info = a.vars.entry(v.clone()).or_default();
            info.read_sites += 1;
            info.read_nested |= nested;
            info.first_read_stmt.get_or_insert(idx);
            if info.first_event_stmt.is_none() {
                info.first_event_stmt = Some(idx);
                info.first_event_order = order;
            }
        }
        Spec::Write(alts) => {
            for alt in alts {
                for seg in alt.segments() {
                    if let Segment::Splice(t) = seg {
                        scan_term(t, idx, a);
                    }
                }
            }
        }
        Spec::Branch {
            cond,
            when_false,
            when_true,
        } => {
            scan_term(&Term::Bool(cond.clone()), idx, a);
            for sub in when_true.stmts() {
                scan_stmt(sub, idx, true, a);
            }
            for sub in when_false.stmts() {
                scan_stmt(sub, idx, true, a);
            }
        }
        Spec::Loop(body) => {
            for sub in body.stmts() {
                scan_stmt(sub, idx, true, a);
            }
        }
        Spec::Seq(x, y) => {
            // Nested sequences inside blocks arrive flattened via stmts();
            // normalize() upstream makes this unreachable, but recurse to
            // stay total.
            scan_stmt(x, idx, nested, a);
            scan_stmt(y, idx, nested, a);
        }
    }
}

fn scan_term(term: &Term, idx: usize, a: &mut Analysis) {
    match term {
        Term::Int(t) => scan_int(t, idx, a),
        Term::Bool(t) => scan_bool(t, idx, a),
        Term::List(ListTerm::All(v)) => {
            a.raw_list_use.get_or_insert_with(|| term.to_string());
            mark_use(v, idx, a, |info| info.history_used = true);
        }
    }
}

fn scan_int(t: &IntTerm, idx: usize, a: &mut Analysis) {
    match t {
        IntTerm::Lit(_) => {}
        IntTerm::Current(v) => mark_use(v, idx, a, |info| info.needs_curr = true),
        IntTerm::Add(l, r) | IntTerm::Sub(l, r) | IntTerm::Mul(l, r) => {
            scan_int(l, idx, a);
            scan_int(r, idx, a);
        }
        IntTerm::Sum(ListTerm::All(v)) => mark_use(v, idx, a, |info| {
            info.needs_sum = true;
            info.history_used = true;
        }),
        IntTerm::Product(ListTerm::All(v)) => mark_use(v, idx, a, |info| {
            info.needs_prod = true;
            info.history_used = true;
        }),
        IntTerm::Length(ListTerm::All(v)) => mark_use(v, idx, a, |info| {
            info.needs_len = true;
            info.history_used = true;
        }),
    }
}

fn scan_bool(t: &BoolTerm, idx: usize, a: &mut Analysis) {
    match t {
        BoolTerm::Cmp(_, l, r) => {
            scan_int(l, idx, a);
            scan_int(r, idx, a);
        }
        BoolTerm::And(l, r) | BoolTerm::Or(l, r) => {
            scan_bool(l, idx, a);
            scan_bool(r, idx, a);
        }
        BoolTerm::Not(x) => scan_bool(x, idx, a),
    }
}

fn mark_use(v: &Varname, idx: usize, a: &mut Analysis, mark: impl FnOnce(&mut VarInfo)) {
    a.event_counter += 1;
    let order = a.event_counter;
    let info = a.vars.entry(v.clone()).or_default();
    mark(info);
    info.first_use_stmt = Some(info.first_use_stmt.map_or(idx, |i| i.min(idx)));
    if info.first_event_stmt.is_none() {
        info.first_event_stmt = Some(idx);
        info.first_event_order = order;
    }
}

impl VarInfo {
    /// A variable that stays a plain scalar binding: read exactly once, at
    /// the top level, before any term references it.
    fn plain_scalar(&self) -> bool {
        self.read_sites == 1
            && !self.read_nested
            && match (self.first_read_stmt, self.first_use_stmt) {
                (Some(read), Some(used)) => read < used,
                (Some(_), None) => true,
                _ => false,
            }
    }
}

const TMP_POOL: [&str; 4] = ["v", "w", "u", "v0"];

fn pick_tmp_name(taken: &[String]) -> String {
    TMP_POOL
        .iter()
        .map(|s| s.to_string())
        .find(|cand| !taken.contains(cand))
        .unwrap_or_else(|| "v1".to_string())
}

// ---------------------------------------------------------------------
// List-accumulation style
// ---------------------------------------------------------------------

struct ListCtx {
    list_vars: Vec<Varname>,
    tmp: String,
}

impl ListCtx {
    fn is_list(&self, v: &Varname) -> bool {
        self.list_vars.contains(v)
    }
}

fn lower_list_accum(spec: &Spec, a: &Analysis) -> ProgramIr {
    let list_vars: Vec<Varname> = a
        .vars
        .iter()
        .filter(|(_, info)| !(info.plain_scalar() && !info.history_used))
        .map(|(v, _)| v.clone())
        .collect();
    let spec_names: Vec<String> = a.vars.keys().map(|v| v.as_str().to_string()).collect();
    let ctx = ListCtx {
        list_vars,
        tmp: pick_tmp_name(&spec_names),
    };

    // Sequence variables initialize right before the first statement that
    // touches them.
    let mut inits: BTreeMap<usize, Vec<(usize, String)>> = BTreeMap::new();
    for v in &ctx.list_vars {
        let info = &a.vars[v];
        if let Some(anchor) = info.first_event_stmt {
            inits
                .entry(anchor)
                .or_default()
                .push((info.first_event_order, v.as_str().to_string()));
        }
    }

    let mut body = Vec::new();
    for (idx, stmt) in spec.stmts().into_iter().enumerate() {
        if let Some(mut vars) = inits.remove(&idx) {
            vars.sort_by_key(|(order, _)| *order);
            for (_, name) in vars {
                body.push(IrStmt::Assign(name, IrExpr::EmptyList));
            }
        }
        lower_list_stmt(stmt, &ctx, &mut body);
    }
    let tmp_used = !ctx.list_vars.is_empty();
    ProgramIr {
        style: Style::ListAccum,
        body,
        state: vec![],
        tmp_var: tmp_used.then_some(ctx.tmp),
    }
}

fn lower_list_stmt(stmt: &Spec, ctx: &ListCtx, out: &mut Vec<IrStmt>) {
    match stmt {
        Spec::Nop => {}
        Spec::Exit => out.push(IrStmt::Break),
        Spec::Read(v, _) => {
            if ctx.is_list(v) {
                out.push(IrStmt::ReadInto(ctx.tmp.clone()));
                out.push(IrStmt::Assign(
                    v.as_str().to_string(),
                    IrExpr::Append(
                        v.as_str().to_string(),
                        Box::new(IrExpr::Var(ctx.tmp.clone())),
                    ),
                ));
            } else {
                out.push(IrStmt::ReadInto(v.as_str().to_string()));
            }
        }
        Spec::Write(alts) => {
            if let Some(first) = alts.first() {
                if !first.is_empty() {
                    out.push(IrStmt::Print(lower_list_pattern(first, ctx)));
                }
            }
        }
        Spec::Branch {
            cond,
            when_false,
            when_true,
        } => {
            let mut then_body = Vec::new();
            for sub in when_true.stmts() {
                lower_list_stmt(sub, ctx, &mut then_body);
            }
            let mut else_body = Vec::new();
            for sub in when_false.stmts() {
                lower_list_stmt(sub, ctx, &mut else_body);
            }
            out.push(IrStmt::If {
                cond: lower_list_bool(cond, ctx),
                then_body,
                else_body,
            });
        }
        Spec::Loop(body) => {
            let mut loop_body = Vec::new();
            for sub in body.stmts() {
                lower_list_stmt(sub, ctx, &mut loop_body);
            }
            out.push(IrStmt::Loop(loop_body));
        }
        Spec::Seq(x, y) => {
            lower_list_stmt(x, ctx, out);
            lower_list_stmt(y, ctx, out);
        }
    }
}

fn lower_list_pattern(pattern: &OutputPattern, ctx: &ListCtx) -> Vec<PrintPiece> {
    pattern
        .segments()
        .iter()
        .map(|seg| match seg {
            Segment::Text(t) => PrintPiece::Text(t.clone()),
            Segment::Splice(Term::Int(t)) => PrintPiece::Expr(lower_list_int(t, ctx)),
            Segment::Splice(Term::List(ListTerm::All(v))) => {
                PrintPiece::Expr(IrExpr::ListVar(v.as_str().to_string()))
            }
            Segment::Splice(Term::Bool(t)) => PrintPiece::Expr(lower_list_bool(t, ctx)),
        })
        .collect()
}

fn lower_list_int(t: &IntTerm, ctx: &ListCtx) -> IrExpr {
    match t {
        IntTerm::Lit(n) => IrExpr::Lit(*n),
        IntTerm::Current(v) => {
            if ctx.is_list(v) {
                IrExpr::LastOf(v.as_str().to_string())
            } else {
                IrExpr::Var(v.as_str().to_string())
            }
        }
        IntTerm::Add(l, r) => IrExpr::add(lower_list_int(l, ctx), lower_list_int(r, ctx)),
        IntTerm::Sub(l, r) => IrExpr::sub(lower_list_int(l, ctx), lower_list_int(r, ctx)),
        IntTerm::Mul(l, r) => IrExpr::mul(lower_list_int(l, ctx), lower_list_int(r, ctx)),
        IntTerm::Sum(ListTerm::All(v)) => IrExpr::SumOf(v.as_str().to_string()),
        IntTerm::Product(ListTerm::All(v)) => IrExpr::ProdOf(v.as_str().to_string()),
        IntTerm::Length(ListTerm::All(v)) => IrExpr::LenOf(v.as_str().to_string()),
    }
}

fn lower_list_bool(t: &BoolTerm, ctx: &ListCtx) -> IrExpr {
    match t {
        BoolTerm::Cmp(op, l, r) => IrExpr::cmp(*op, lower_list_int(l, ctx), lower_list_int(r, ctx)),
        BoolTerm::And(l, r) => IrExpr::And(
            Box::new(lower_list_bool(l, ctx)),
            Box::new(lower_list_bool(r, ctx)),
        ),
        BoolTerm::Or(l, r) => IrExpr::Or(
            Box::new(lower_list_bool(l, ctx)),
            Box::new(lower_list_bool(r, ctx)),
        ),
        BoolTerm::Not(x) => IrExpr::Not(Box::new(lower_list_bool(x, ctx))),
    }
}

// ---------------------------------------------------------------------
// Fold-state style
// ---------------------------------------------------------------------

#[derive(Debug, Default, Clone)]
struct AccSet {
    sum: Option<String>,
    prod: Option<String>,
    len: Option<String>,
    curr: Option<String>,
}

struct FoldCtx {
    accs: BTreeMap<Varname, AccSet>,
    plain: Vec<Varname>,
    tmp: String,
}

fn lower_fold_state(spec: &Spec, a: &Analysis) -> Result<ProgramIr, StyleUnsupported> {
    if let Some(term) = &a.raw_list_use {
        return Err(StyleUnsupported { term: term.clone() });
    }

    let spec_names: Vec<String> = a.vars.keys().map(|v| v.as_str().to_string()).collect();
    let mut taken = spec_names.clone();
    let mut accs: BTreeMap<Varname, AccSet> = BTreeMap::new();
    let mut plain = Vec::new();
    let mut state = Vec::new();
    let mut inits: BTreeMap<usize, Vec<(usize, String, IrExpr)>> = BTreeMap::new();

    type Slot = fn(&mut AccSet) -> &mut Option<String>;
    for (v, info) in &a.vars {
        if info.plain_scalar() {
            plain.push(v.clone());
            continue;
        }
        let mut set = AccSet::default();
        let needed: [(bool, &str, IrExpr, Slot); 4] = [
            (info.needs_sum, "s", IrExpr::Lit(0), |s| &mut s.sum),
            (info.needs_prod, "p", IrExpr::Lit(1), |s| &mut s.prod),
            (info.needs_len, "l", IrExpr::Lit(0), |s| &mut s.len),
            (info.needs_curr, "c", IrExpr::Lit(0), |s| &mut s.curr),
        ];
        for (wanted, base, init, slot) in needed {
            if !wanted {
                continue;
            }
            let name = allocate_name(base, &mut taken);
            *slot(&mut set) = Some(name.clone());
            state.push(StateVar {
                name: name.clone(),
                init: init.clone(),
            });
            if let Some(anchor) = info.first_event_stmt {
                inits
                    .entry(anchor)
                    .or_default()
                    .push((info.first_event_order, name, init));
            }
        }
        accs.insert(v.clone(), set);
    }

    let ctx = FoldCtx {
        accs,
        plain,
        tmp: pick_tmp_name(&taken),
    };

    let mut body = Vec::new();
    for (idx, stmt) in spec.stmts().into_iter().enumerate() {
        if let Some(mut vars) = inits.remove(&idx) {
            vars.sort_by_key(|(order, _, _)| *order);
            for (_, name, init) in vars {
                body.push(IrStmt::Assign(name, init));
            }
        }
        lower_fold_stmt(stmt, &ctx, &mut body)?;
    }
    let tmp_used = !ctx.accs.is_empty();
    Ok(ProgramIr {
        style: Style::FoldState,
        body,
        state,
        tmp_var: tmp_used.then_some(ctx.tmp),
    })
}

fn allocate_name(base: &str, taken: &mut Vec<String>) -> String {
    let mut candidate = base.to_string();
    let mut i = 2;
    while taken.contains(&candidate) {
        candidate = format!("{base}{i}");
        i += 1;
    }
    taken.push(candidate.clone());
    candidate
}

fn lower_fold_stmt(
    stmt: &Spec,
    ctx: &FoldCtx,
    out: &mut Vec<IrStmt>,
) -> Result<(), StyleUnsupported> {
    match stmt {
        Spec::Nop => {}
        Spec::Exit => out.push(IrStmt::Break),
        Spec::Read(v, _) => {
            if ctx.plain.contains(v) {
                out.push(IrStmt::ReadInto(v.as_str().to_string()));
            } else {
                out.push(IrStmt::ReadInto(ctx.tmp.clone()));
                let set = ctx.accs.get(v).cloned().unwrap_or_default();
                let tmp = || IrExpr::Var(ctx.tmp.clone());
                if let Some(s) = &set.sum {
                    out.push(IrStmt::Assign(
                        s.clone(),
                        IrExpr::add(IrExpr::Var(s.clone()), tmp()),
                    ));
                }
                if let Some(p) = &set.prod {
                    out.push(IrStmt::Assign(
                        p.clone(),
                        IrExpr::mul(IrExpr::Var(p.clone()), tmp()),
                    ));
                }
                if let Some(l) = &set.len {
                    out.push(IrStmt::Assign(
                        l.clone(),
                        IrExpr::add(IrExpr::Var(l.clone()), IrExpr::Lit(1)),
                    ));
                }
                if let Some(c) = &set.curr {
                    out.push(IrStmt::Assign(c.clone(), tmp()));
                }
            }
        }
        Spec::Write(alts) => {
            if let Some(first) = alts.first() {
                if !first.is_empty() {
                    let pieces = first
                        .segments()
                        .iter()
                        .map(|seg| {
                            Ok(match seg {
                                Segment::Text(t) => PrintPiece::Text(t.clone()),
                                Segment::Splice(Term::Int(t)) => {
                                    PrintPiece::Expr(lower_fold_int(t, ctx)?)
                                }
                                Segment::Splice(other) => {
                                    return Err(StyleUnsupported {
                                        term: other.to_string(),
                                    })
                                }
                            })
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    out.push(IrStmt::Print(pieces));
                }
            }
        }
        Spec::Branch {
            cond,
            when_false,
            when_true,
        } => {
            let mut then_body = Vec::new();
            for sub in when_true.stmts() {
                lower_fold_stmt(sub, ctx, &mut then_body)?;
            }
            let mut else_body = Vec::new();
            for sub in when_false.stmts() {
                lower_fold_stmt(sub, ctx, &mut else_body)?;
            }
            out.push(IrStmt::If {
                cond: lower_fold_bool(cond, ctx)?,
                then_body,
                else_body,
            });
        }
        Spec::Loop(body) => {
            let mut loop_body = Vec::new();
            for sub in body.stmts() {
                lower_fold_stmt(sub, ctx, &mut loop_body)?;
            }
            out.push(IrStmt::Loop(loop_body));
        }
        Spec::Seq(x, y) => {
            lower_fold_stmt(x, ctx, out)?;
            lower_fold_stmt(y, ctx, out)?;
        }
    }
    Ok(())
}

fn lower_fold_int(t: &IntTerm, ctx: &FoldCtx) -> Result<IrExpr, StyleUnsupported> {
    let acc = |v: &Varname, pick: fn(&AccSet) -> Option<String>| {
        ctx.accs
            .get(v)
            .and_then(pick)
            .map(IrExpr::Var)
            .ok_or_else(|| StyleUnsupported {
                term: t.to_string(),
            })
    };
    Ok(match t {
        IntTerm::Lit(n) => IrExpr::Lit(*n),
        IntTerm::Current(v) => {
            if ctx.plain.contains(v) {
                IrExpr::Var(v.as_str().to_string())
            } else {
                acc(v, |s| s.curr.clone())?
            }
        }
        IntTerm::Add(l, r) => IrExpr::add(lower_fold_int(l, ctx)?, lower_fold_int(r, ctx)?),
        IntTerm::Sub(l, r) => IrExpr::sub(lower_fold_int(l, ctx)?, lower_fold_int(r, ctx)?),
        IntTerm::Mul(l, r) => IrExpr::mul(lower_fold_int(l, ctx)?, lower_fold_int(r, ctx)?),
        IntTerm::Sum(ListTerm::All(v)) => {
            if ctx.plain.contains(v) {
                IrExpr::Var(v.as_str().to_string())
            } else {
                acc(v, |s| s.sum.clone())?
            }
        }
        IntTerm::Product(ListTerm::All(v)) => {
            if ctx.plain.contains(v) {
                IrExpr::Var(v.as_str().to_string())
            } else {
                acc(v, |s| s.prod.clone())?
            }
        }
        IntTerm::Length(ListTerm::All(v)) => {
            if ctx.plain.contains(v) {
                IrExpr::Lit(1)
            } else {
                acc(v, |s| s.len.clone())?
            }
        }
    })
}

fn lower_fold_bool(t: &BoolTerm, ctx: &FoldCtx) -> Result<IrExpr, StyleUnsupported> {
    Ok(match t {
        BoolTerm::Cmp(op, l, r) => {
            IrExpr::cmp(*op, lower_fold_int(l, ctx)?, lower_fold_int(r, ctx)?)
        }
        BoolTerm::And(l, r) => IrExpr::And(
            Box::new(lower_fold_bool(l, ctx)?),
            Box::new(lower_fold_bool(r, ctx)?),
        ),
        BoolTerm::Or(l, r) => IrExpr::Or(
            Box::new(lower_fold_bool(l, ctx)?),
            Box::new(lower_fold_bool(r, ctx)?),
        ),
        BoolTerm::Not(x) => IrExpr::Not(Box::new(lower_fold_bool(x, ctx)?)),
    })
}
