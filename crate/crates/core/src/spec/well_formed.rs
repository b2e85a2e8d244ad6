//! Well-formedness checking: exits dominated by loops, variables introduced
//! before use, nonempty write alternatives.

use std::collections::BTreeSet;
use std::fmt;

use super::ast::Spec;
use super::pattern::Segment;
use super::term::Varname;
use super::value_set::ValueSet;

/// One step from a node to a child, recorded so violations can point at the
/// offending subtree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    SeqFirst,
    SeqSecond,
    WhenFalse,
    WhenTrue,
    LoopBody,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Path(Vec<Step>);

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<root>");
        }
        for step in &self.0 {
            let s = match step {
                Step::SeqFirst => "/seq.0",
                Step::SeqSecond => "/seq.1",
                Step::WhenFalse => "/branch.false",
                Step::WhenTrue => "/branch.true",
                Step::LoopBody => "/loop",
            };
            f.write_str(s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `exit` with no enclosing loop.
    ExitOutsideLoop,
    /// A term references a variable no read introduces. The check is
    /// conservative: a read anywhere in the tree counts.
    UnboundVariable(Varname),
    /// A write with an empty alternative list.
    NoWriteAlternatives,
    /// A range value set with lo > hi.
    EmptyRange(i64, i64),
    /// Literal pattern text containing a newline.
    NewlineInPattern,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::ExitOutsideLoop => f.write_str("exit outside loop"),
            ViolationKind::UnboundVariable(v) => write!(f, "unbound variable {v}"),
            ViolationKind::NoWriteAlternatives => f.write_str("write with no alternatives"),
            ViolationKind::EmptyRange(lo, hi) => write!(f, "empty range({lo}, {hi})"),
            ViolationKind::NewlineInPattern => f.write_str("newline in output pattern"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: Path,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}", self.kind, self.path)
    }
}

/// Checks every specification invariant, collecting all violations rather
/// than stopping at the first.
pub fn well_formed(spec: &Spec) -> Result<(), Vec<Violation>> {
    let introduced = spec.read_vars();
    let mut violations = Vec::new();
    check(spec, false, &introduced, &mut Vec::new(), &mut violations);
    if violations.is_empty() {
        Ok(())
    } else {
        Err(violations)
    }
}

fn check(
    spec: &Spec,
    in_loop: bool,
    introduced: &BTreeSet<Varname>,
    path: &mut Vec<Step>,
    out: &mut Vec<Violation>,
) {
    let violate = |kind: ViolationKind, path: &[Step], out: &mut Vec<Violation>| {
        out.push(Violation {
            path: Path(path.to_vec()),
            kind,
        });
    };
    match spec {
        Spec::Nop => {}
        Spec::Exit => {
            if !in_loop {
                violate(ViolationKind::ExitOutsideLoop, path, out);
            }
        }
        Spec::Read(_, vs) => {
            if let ValueSet::Range(lo, hi) = vs {
                if lo > hi {
                    violate(ViolationKind::EmptyRange(*lo, *hi), path, out);
                }
            }
        }
        Spec::Write(alts) => {
            if alts.is_empty() {
                violate(ViolationKind::NoWriteAlternatives, path, out);
            }
            for alt in alts {
                for seg in alt.segments() {
                    match seg {
                        Segment::Text(t) if t.contains('\n') => {
                            violate(ViolationKind::NewlineInPattern, path, out);
                        }
                        Segment::Text(_) => {}
                        Segment::Splice(t) => {
                            check_term_vars(t, introduced, path, out);
                        }
                    }
                }
            }
        }
        Spec::Branch {
            cond,
            when_false,
            when_true,
        } => {
            check_term_vars(
                &super::term::Term::Bool(cond.clone()),
                introduced,
                path,
                out,
            );
            path.push(Step::WhenFalse);
            check(when_false, in_loop, introduced, path, out);
            path.pop();
            path.push(Step::WhenTrue);
            check(when_true, in_loop, introduced, path, out);
            path.pop();
        }
        Spec::Loop(body) => {
            path.push(Step::LoopBody);
            check(body, true, introduced, path, out);
            path.pop();
        }
        Spec::Seq(a, b) => {
            path.push(Step::SeqFirst);
            check(a, in_loop, introduced, path, out);
            path.pop();
            path.push(Step::SeqSecond);
            check(b, in_loop, introduced, path, out);
            path.pop();
        }
    }
}

fn check_term_vars(
    term: &super::term::Term,
    introduced: &BTreeSet<Varname>,
    path: &[Step],
    out: &mut Vec<Violation>,
) {
    let mut seen = BTreeSet::new();
    term.for_each_var(&mut |v| {
        if !introduced.contains(v) && seen.insert(v.clone()) {
            out.push(Violation {
                path: Path(path.to_vec()),
                kind: ViolationKind::UnboundVariable(v.clone()),
            });
        }
    });
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::pattern::OutputPattern;
    use crate::spec::term::{BoolTerm, CmpOp, IntTerm};

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    #[test]
    fn bare_exit_is_rejected() {
        let err = well_formed(&Spec::Exit).unwrap_err();
        assert_eq!(err.len(), 1);
        assert_eq!(err[0].kind, ViolationKind::ExitOutsideLoop);
    }

    #[test]
    fn exit_inside_loop_is_fine() {
        assert!(well_formed(&Spec::till_exit(Spec::Exit)).is_ok());
    }

    #[test]
    fn exit_in_branch_outside_loop_is_rejected() {
        let s = Spec::branch(
            BoolTerm::cmp(CmpOp::Eq, IntTerm::lit(0), IntTerm::lit(0)),
            Spec::Nop,
            Spec::Exit,
        );
        let err = well_formed(&s).unwrap_err();
        assert_eq!(err[0].kind, ViolationKind::ExitOutsideLoop);
        assert_eq!(err[0].path.to_string(), "/branch.true");
    }

    #[test]
    fn unbound_splice_variable() {
        let s = Spec::write_one(OutputPattern::splice(IntTerm::current(var("z"))));
        let err = well_formed(&s).unwrap_err();
        assert_eq!(err[0].kind, ViolationKind::UnboundVariable(var("z")));
    }

    #[test]
    fn read_anywhere_counts_as_introduced() {
        // The write references x before the read, but the conservative
        // check accepts it.
        let s = Spec::sequence([
            Spec::write_one(OutputPattern::splice(IntTerm::length_of(var("x")))),
            Spec::Read(var("x"), crate::spec::ValueSet::Ints),
        ]);
        assert!(well_formed(&s).is_ok());
    }

    #[test]
    fn empty_write_and_empty_range() {
        let err = well_formed(&Spec::Write(vec![])).unwrap_err();
        assert_eq!(err[0].kind, ViolationKind::NoWriteAlternatives);
        let err =
            well_formed(&Spec::Read(var("x"), crate::spec::ValueSet::Range(3, 1))).unwrap_err();
        assert_eq!(err[0].kind, ViolationKind::EmptyRange(3, 1));
    }
}
