//! Recursive descent parser for the specification surface syntax.

use crate::spec::{
    BoolTerm, CmpOp, IntTerm, ListTerm, OutputPattern, Segment, Spec, Term, TermKind, ValueSet,
    Varname,
};

use super::lexer::{Lexer, RawSegment, Spanned, Tok};
use super::ParseError;

pub(super) fn parse(src: &str) -> Result<Spec, ParseError> {
    let toks = Lexer::new(src).tokenize()?;
    let mut parser = Parser { toks, pos: 0 };
    let spec = parser.parse_stmts()?;
    if let Some(t) = parser.peek() {
        return Err(parser.err_at(
            t.clone(),
            "expected a statement",
            &["statement", "end of input"],
        ));
    }
    Ok(spec)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn end_pos(&self) -> (u32, u32) {
        match self.toks.last() {
            Some(t) => (t.line, t.col + 1),
            None => (1, 1),
        }
    }

    fn err_eof(&self, expected: &[&str]) -> ParseError {
        let (line, column) = self.end_pos();
        ParseError {
            line,
            column,
            message: "unexpected end of input".into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn err_at(&self, tok: Spanned, message: &str, expected: &[&str]) -> ParseError {
        ParseError {
            line: tok.line,
            column: tok.col,
            message: format!("{message}, found {}", tok.tok.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn expect(&mut self, want: Tok, expected: &str) -> Result<Spanned, ParseError> {
        match self.bump() {
            None => Err(self.err_eof(&[expected])),
            Some(t) if t.tok == want => Ok(t),
            Some(t) => Err(self.err_at(t, &format!("expected {expected}"), &[expected])),
        }
    }

    /// stmt* — stops before '}' or end of input. The empty statement list
    /// is `Nop`.
    fn parse_stmts(&mut self) -> Result<Spec, ParseError> {
        let mut stmts = Vec::new();
        loop {
            match self.peek().map(|t| &t.tok) {
                None | Some(Tok::RBrace) => break,
                _ => stmts.push(self.parse_stmt()?),
            }
        }
        Ok(Spec::sequence(stmts))
    }

    fn parse_stmt(&mut self) -> Result<Spec, ParseError> {
        let t = self.bump().ok_or_else(|| self.err_eof(&["statement"]))?;
        match t.tok {
            Tok::Read => {
                let var = self.parse_varname()?;
                self.expect(Tok::Colon, "':'")?;
                let vs = self.parse_value_set()?;
                Ok(Spec::Read(var, vs))
            }
            Tok::Write => {
                self.expect(Tok::LBracket, "'['")?;
                let mut alts = vec![self.parse_pattern()?];
                while matches!(self.peek().map(|t| &t.tok), Some(Tok::Pipe)) {
                    self.bump();
                    alts.push(self.parse_pattern()?);
                }
                self.expect(Tok::RBracket, "']'")?;
                Ok(Spec::Write(alts))
            }
            Tok::If => {
                self.expect(Tok::LParen, "'('")?;
                let cond = self.parse_bool_expr()?;
                self.expect(Tok::RParen, "')'")?;
                self.expect(Tok::Then, "'then'")?;
                let when_true = self.parse_block()?;
                self.expect(Tok::Else, "'else'")?;
                let when_false = self.parse_block()?;
                Ok(Spec::branch(cond, when_false, when_true))
            }
            Tok::Loop => Ok(Spec::till_exit(self.parse_block()?)),
            Tok::Exit => Ok(Spec::Exit),
            _ => Err(self.err_at(
                t,
                "expected a statement",
                &["'read'", "'write'", "'if'", "'loop'", "'exit'"],
            )),
        }
    }

    fn parse_block(&mut self) -> Result<Spec, ParseError> {
        self.expect(Tok::LBrace, "'{'")?;
        let body = self.parse_stmts()?;
        self.expect(Tok::RBrace, "'}'")?;
        Ok(body)
    }

    fn parse_varname(&mut self) -> Result<Varname, ParseError> {
        let t = self.bump().ok_or_else(|| self.err_eof(&["identifier"]))?;
        match t.tok {
            Tok::Ident(ref name) => Varname::new(name.clone()).map_err(|e| ParseError {
                line: t.line,
                column: t.col,
                message: e.to_string(),
                expected: vec!["identifier".into()],
            }),
            _ => Err(self.err_at(t, "expected a variable name", &["identifier"])),
        }
    }

    fn parse_value_set(&mut self) -> Result<ValueSet, ParseError> {
        let t = self.bump().ok_or_else(|| self.err_eof(&["value set"]))?;
        match t.tok {
            Tok::Ints => Ok(ValueSet::Ints),
            Tok::Nats => Ok(ValueSet::Nats),
            Tok::Range => {
                self.expect(Tok::LParen, "'('")?;
                let lo = self.parse_signed_int()?;
                self.expect(Tok::Comma, "','")?;
                let hi = self.parse_signed_int()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(ValueSet::Range(lo, hi))
            }
            _ => Err(self.err_at(t, "expected a value set", &["'ints'", "'nats'", "'range'"])),
        }
    }

    fn parse_signed_int(&mut self) -> Result<i64, ParseError> {
        let t = self.bump().ok_or_else(|| self.err_eof(&["integer"]))?;
        match t.tok {
            Tok::Int(n) => Ok(n),
            Tok::Minus => match self.bump() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => Ok(-n),
                Some(t) => Err(self.err_at(t, "expected an integer after '-'", &["integer"])),
                None => Err(self.err_eof(&["integer"])),
            },
            _ => Err(self.err_at(t, "expected an integer", &["integer"])),
        }
    }

    fn parse_pattern(&mut self) -> Result<OutputPattern, ParseError> {
        let t = self
            .bump()
            .ok_or_else(|| self.err_eof(&["output pattern", "'skip'"]))?;
        match t.tok {
            Tok::Skip => Ok(OutputPattern::empty()),
            Tok::Pattern(raw) => {
                let mut segments = Vec::new();
                for seg in raw {
                    match seg {
                        RawSegment::Text(text) => segments.push(Segment::Text(text)),
                        RawSegment::Splice { src, line, col } => {
                            let term = parse_splice(&src, line, col)?;
                            segments.push(Segment::Splice(term));
                        }
                    }
                }
                Ok(OutputPattern::new(segments))
            }
            _ => Err(self.err_at(
                t,
                "expected an output pattern",
                &["quoted pattern", "'skip'"],
            )),
        }
    }

    // Terms. Precedence from loosest to tightest:
    //   || , && , not , comparisons , + - , * , atoms
    // Each level checks operand kinds as it combines them.

    fn parse_bool_expr(&mut self) -> Result<BoolTerm, ParseError> {
        let (term, line, col) = self.parse_or()?;
        expect_kind_bool(term, line, col)
    }

    fn parse_or(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let (mut acc, line, col) = self.parse_and()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::OrOr)) {
            self.bump();
            let l = expect_kind_bool(acc, line, col)?;
            let (rhs, rl, rc) = self.parse_and()?;
            let r = expect_kind_bool(rhs, rl, rc)?;
            acc = Term::Bool(BoolTerm::or(l, r));
        }
        Ok((acc, line, col))
    }

    fn parse_and(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let (mut acc, line, col) = self.parse_not()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::AndAnd)) {
            self.bump();
            let l = expect_kind_bool(acc, line, col)?;
            let (rhs, rl, rc) = self.parse_not()?;
            let r = expect_kind_bool(rhs, rl, rc)?;
            acc = Term::Bool(BoolTerm::and(l, r));
        }
        Ok((acc, line, col))
    }

    fn parse_not(&mut self) -> Result<(Term, u32, u32), ParseError> {
        if let Some(t) = self.peek() {
            if t.tok == Tok::Not {
                let (line, col) = (t.line, t.col);
                self.bump();
                let (operand, ol, oc) = self.parse_not()?;
                let b = expect_kind_bool(operand, ol, oc)?;
                return Ok((Term::Bool(BoolTerm::negate(b)), line, col));
            }
        }
        self.parse_cmp()
    }

    fn parse_cmp(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let (lhs, line, col) = self.parse_add()?;
        let op = match self.peek().map(|t| &t.tok) {
            Some(Tok::EqEq) => CmpOp::Eq,
            Some(Tok::SlashEq) => CmpOp::Neq,
            Some(Tok::Lt) => CmpOp::Lt,
            Some(Tok::Leq) => CmpOp::Leq,
            Some(Tok::Gt) => CmpOp::Gt,
            Some(Tok::Geq) => CmpOp::Geq,
            _ => return Ok((lhs, line, col)),
        };
        self.bump();
        let l = expect_kind_int(lhs, line, col)?;
        let (rhs, rl, rc) = self.parse_add()?;
        let r = expect_kind_int(rhs, rl, rc)?;
        Ok((Term::Bool(BoolTerm::cmp(op, l, r)), line, col))
    }

    fn parse_add(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let (mut acc, line, col) = self.parse_mul()?;
        loop {
            let sub = match self.peek().map(|t| &t.tok) {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => return Ok((acc, line, col)),
            };
            self.bump();
            let l = expect_kind_int(acc, line, col)?;
            let (rhs, rl, rc) = self.parse_mul()?;
            let r = expect_kind_int(rhs, rl, rc)?;
            acc = Term::Int(if sub {
                IntTerm::sub(l, r)
            } else {
                IntTerm::add(l, r)
            });
        }
    }

    fn parse_mul(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let (mut acc, line, col) = self.parse_atom()?;
        while matches!(self.peek().map(|t| &t.tok), Some(Tok::Star)) {
            self.bump();
            let l = expect_kind_int(acc, line, col)?;
            let (rhs, rl, rc) = self.parse_atom()?;
            let r = expect_kind_int(rhs, rl, rc)?;
            acc = Term::Int(IntTerm::mul(l, r));
        }
        Ok((acc, line, col))
    }

    fn parse_atom(&mut self) -> Result<(Term, u32, u32), ParseError> {
        let t = self.bump().ok_or_else(|| self.err_eof(&["term"]))?;
        let (line, col) = (t.line, t.col);
        let term = match t.tok {
            Tok::Int(n) => Term::Int(IntTerm::Lit(n)),
            Tok::Minus => match self.bump() {
                Some(Spanned {
                    tok: Tok::Int(n), ..
                }) => Term::Int(IntTerm::Lit(-n)),
                Some(t) => {
                    return Err(self.err_at(
                        t,
                        "expected an integer literal after '-'",
                        &["integer"],
                    ))
                }
                None => return Err(self.err_eof(&["integer"])),
            },
            Tok::All => {
                self.expect(Tok::LParen, "'('")?;
                let var = self.parse_varname()?;
                self.expect(Tok::RParen, "')'")?;
                Term::List(ListTerm::All(var))
            }
            Tok::Curr => {
                self.expect(Tok::LParen, "'('")?;
                let var = self.parse_varname()?;
                self.expect(Tok::RParen, "')'")?;
                Term::Int(IntTerm::Current(var))
            }
            Tok::Len | Tok::Sum | Tok::Prod => {
                let op = t.tok.clone();
                self.expect(Tok::LParen, "'('")?;
                let (arg, al, ac) = self.parse_or()?;
                self.expect(Tok::RParen, "')'")?;
                let list = expect_kind_list(arg, al, ac)?;
                Term::Int(match op {
                    Tok::Len => IntTerm::Length(list),
                    Tok::Sum => IntTerm::Sum(list),
                    _ => IntTerm::Product(list),
                })
            }
            Tok::LParen => {
                let (inner, ..) = self.parse_or()?;
                self.expect(Tok::RParen, "')'")?;
                inner
            }
            _ => {
                return Err(self.err_at(
                    t,
                    "expected a term",
                    &[
                        "integer", "'all'", "'curr'", "'len'", "'sum'", "'prod'", "'not'", "'('",
                    ],
                ))
            }
        };
        Ok((term, line, col))
    }
}

fn kind_error(found: TermKind, wanted: &str, line: u32, col: u32) -> ParseError {
    ParseError {
        line,
        column: col,
        message: format!("expected {wanted} term, found {found} term"),
        expected: vec![format!("{wanted} term")],
    }
}

fn expect_kind_int(term: Term, line: u32, col: u32) -> Result<IntTerm, ParseError> {
    match term {
        Term::Int(t) => Ok(t),
        other => Err(kind_error(other.kind(), "integer", line, col)),
    }
}

fn expect_kind_bool(term: Term, line: u32, col: u32) -> Result<BoolTerm, ParseError> {
    match term {
        Term::Bool(t) => Ok(t),
        other => Err(kind_error(other.kind(), "boolean", line, col)),
    }
}

fn expect_kind_list(term: Term, line: u32, col: u32) -> Result<ListTerm, ParseError> {
    match term {
        Term::List(t) => Ok(t),
        other => Err(kind_error(other.kind(), "integer sequence", line, col)),
    }
}

/// Parses one splice body. Splice terms may be integers or sequences;
/// booleans make no sense in an output line.
fn parse_splice(src: &str, line: u32, col: u32) -> Result<Term, ParseError> {
    let toks = Lexer::with_offset(src, line, col).tokenize()?;
    if toks.is_empty() {
        return Err(ParseError {
            line,
            column: col,
            message: "empty splice".into(),
            expected: vec!["term".into()],
        });
    }
    let mut parser = Parser { toks, pos: 0 };
    let (term, tl, tc) = parser.parse_or()?;
    if let Some(t) = parser.peek() {
        return Err(parser.err_at(t.clone(), "trailing tokens in splice", &["'}'"]));
    }
    match term {
        Term::Bool(_) => Err(kind_error(
            TermKind::Bool,
            "integer or integer sequence",
            tl,
            tc,
        )),
        other => Ok(other),
    }
}
