//! The specification tree: reads, writes, branching, exit-terminated loops,
//! and sequential composition.

use std::collections::BTreeSet;

use super::pattern::OutputPattern;
use super::term::{BoolTerm, Term, Varname};
use super::value_set::ValueSet;

/// A console I/O behavior specification.
///
/// Sequential composition is a monoid with [`Spec::Nop`] as identity; the
/// [`Spec::seq`] constructor and [`Spec::normalize`] keep trees in the
/// canonical form (right-nested sequences, no `Nop` operands) so structural
/// equality is meaningful.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Spec {
    /// No I/O behavior.
    Nop,
    /// Read one value into a variable's history.
    Read(Varname, ValueSet),
    /// Emit one output line matching one of the alternatives (at least one;
    /// an empty alternative makes the output optional).
    Write(Vec<OutputPattern>),
    /// Conditional behavior.
    Branch {
        cond: BoolTerm,
        when_false: Box<Spec>,
        when_true: Box<Spec>,
    },
    /// Repeat the body until an `Exit` inside it fires.
    Loop(Box<Spec>),
    /// Terminate the innermost enclosing loop.
    Exit,
    /// Sequential composition.
    Seq(Box<Spec>, Box<Spec>),
}

impl Spec {
    /// Sequential composition, normalized: `Nop` is eliminated and nesting
    /// is rotated to the right. Both arguments are assumed to be canonical
    /// themselves.
    pub fn seq(a: Spec, b: Spec) -> Spec {
        match (a, b) {
            (Spec::Nop, s) => s,
            (s, Spec::Nop) => s,
            (Spec::Seq(x, y), b) => Spec::seq(*x, Spec::seq(*y, b)),
            (a, b) => Spec::Seq(Box::new(a), Box::new(b)),
        }
    }

    /// Composes a whole statement list.
    pub fn sequence(stmts: impl IntoIterator<Item = Spec>) -> Spec {
        let stmts: Vec<Spec> = stmts.into_iter().collect();
        stmts
            .into_iter()
            .rev()
            .fold(Spec::Nop, |acc, s| Spec::seq(s, acc))
    }

    pub fn branch(cond: BoolTerm, when_false: Spec, when_true: Spec) -> Spec {
        Spec::Branch {
            cond,
            when_false: Box::new(when_false),
            when_true: Box::new(when_true),
        }
    }

    pub fn till_exit(body: Spec) -> Spec {
        Spec::Loop(Box::new(body))
    }

    pub fn write_one(pattern: OutputPattern) -> Spec {
        Spec::Write(vec![pattern])
    }

    /// Rewrites the whole tree into canonical form.
    pub fn normalize(self) -> Spec {
        match self {
            Spec::Seq(a, b) => Spec::seq(a.normalize(), b.normalize()),
            Spec::Branch {
                cond,
                when_false,
                when_true,
            } => Spec::branch(cond, when_false.normalize(), when_true.normalize()),
            Spec::Loop(body) => Spec::till_exit(body.normalize()),
            other => other,
        }
    }

    /// The statements of a canonical right-nested sequence, in order.
    pub fn stmts(&self) -> Vec<&Spec> {
        let mut out = Vec::new();
        let mut cur = self;
        loop {
            match cur {
                Spec::Nop => break,
                Spec::Seq(a, b) => {
                    out.push(a.as_ref());
                    cur = b;
                }
                s => {
                    out.push(s);
                    break;
                }
            }
        }
        out
    }

    /// All variables read anywhere in the specification, in name order.
    pub fn read_vars(&self) -> BTreeSet<Varname> {
        let mut vars = BTreeSet::new();
        self.visit(&mut |s| {
            if let Spec::Read(v, _) = s {
                vars.insert(v.clone());
            }
        });
        vars
    }

    /// Visits every node, parents before children.
    pub fn visit(&self, f: &mut impl FnMut(&Spec)) {
        f(self);
        match self {
            Spec::Seq(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Spec::Branch {
                when_false,
                when_true,
                ..
            } => {
                when_false.visit(f);
                when_true.visit(f);
            }
            Spec::Loop(body) => body.visit(f),
            _ => {}
        }
    }

    /// Visits every term embedded in the tree (branch conditions and
    /// pattern splices).
    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        self.visit(&mut |s| match s {
            Spec::Branch { cond, .. } => f(&Term::Bool(cond.clone())),
            Spec::Write(alts) => {
                for alt in alts {
                    alt.for_each_term(f);
                }
            }
            _ => {}
        });
    }

    /// All variables referenced by any term in the tree.
    pub fn referenced_vars(&self) -> BTreeSet<Varname> {
        let mut vars = BTreeSet::new();
        self.for_each_term(&mut |t| {
            t.for_each_var(&mut |v| {
                vars.insert(v.clone());
            })
        });
        vars
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::term::IntTerm;

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    fn read(s: &str) -> Spec {
        Spec::Read(var(s), ValueSet::Ints)
    }

    #[test]
    fn nop_is_identity() {
        let s = read("a");
        assert_eq!(Spec::seq(Spec::Nop, s.clone()), s);
        assert_eq!(Spec::seq(s.clone(), Spec::Nop), s);
    }

    #[test]
    fn seq_right_nests() {
        let a = read("a");
        let b = read("b");
        let c = read("c");
        let left = Spec::seq(Spec::seq(a.clone(), b.clone()), c.clone());
        let right = Spec::seq(a, Spec::seq(b, c));
        assert_eq!(left, right);
    }

    #[test]
    fn normalize_reaches_inside_loops() {
        let raw = Spec::Loop(Box::new(Spec::Seq(
            Box::new(Spec::Seq(Box::new(read("a")), Box::new(Spec::Nop))),
            Box::new(read("b")),
        )));
        let expected = Spec::till_exit(Spec::seq(read("a"), read("b")));
        assert_eq!(raw.normalize(), expected);
    }

    #[test]
    fn stmt_list_flattens() {
        let s = Spec::sequence([read("a"), read("b"), read("c")]);
        assert_eq!(s.stmts().len(), 3);
        assert_eq!(Spec::Nop.stmts().len(), 0);
    }

    #[test]
    fn referenced_and_read_vars() {
        let s = Spec::sequence([
            read("n"),
            Spec::write_one(OutputPattern::splice(IntTerm::sum_of(var("x")))),
        ]);
        assert!(s.read_vars().contains(&var("n")));
        assert!(!s.read_vars().contains(&var("x")));
        assert!(s.referenced_vars().contains(&var("x")));
    }
}
