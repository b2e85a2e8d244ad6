//! Output patterns: the shape of a single output line, mixing literal text
//! with spliced terms.

use std::fmt;

use super::env::Environment;
use super::term::{EvalError, IntTerm, ListTerm, Term, Varname};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Segment {
    /// Literal text; must not contain newlines.
    Text(String),
    /// A spliced term, rendered into the line. Integer splices render as
    /// decimal; sequence splices render as `[v1,v2,...]`.
    Splice(Term),
}

/// One alternative of a write action. The pattern with zero segments is the
/// `skip` alternative: output is optional there. Construction keeps patterns
/// canonical (adjacent literals merged, empty literals dropped).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPattern {
    segments: Vec<Segment>,
}

impl OutputPattern {
    pub fn new(segments: impl IntoIterator<Item = Segment>) -> OutputPattern {
        let mut out: Vec<Segment> = Vec::new();
        for seg in segments {
            match seg {
                Segment::Text(t) if t.is_empty() => {}
                Segment::Text(t) => match out.last_mut() {
                    Some(Segment::Text(prev)) => prev.push_str(&t),
                    _ => out.push(Segment::Text(t)),
                },
                splice => out.push(splice),
            }
        }
        OutputPattern { segments: out }
    }

    /// The `skip` alternative.
    pub fn empty() -> OutputPattern {
        OutputPattern { segments: vec![] }
    }

    pub fn text(t: impl Into<String>) -> OutputPattern {
        OutputPattern::new([Segment::Text(t.into())])
    }

    pub fn splice(t: IntTerm) -> OutputPattern {
        OutputPattern::new([Segment::Splice(Term::Int(t))])
    }

    pub fn splice_list(t: ListTerm) -> OutputPattern {
        OutputPattern::new([Segment::Splice(Term::List(t))])
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Renders the pattern against an environment into the exact output
    /// line text.
    pub fn render(&self, env: &Environment) -> Result<String, EvalError> {
        let mut out = String::new();
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => out.push_str(t),
                Segment::Splice(Term::Int(t)) => out.push_str(&t.eval(env)?.to_string()),
                Segment::Splice(Term::List(t)) => {
                    let xs = t.eval(env)?;
                    out.push('[');
                    for (i, x) in xs.iter().enumerate() {
                        if i > 0 {
                            out.push(',');
                        }
                        out.push_str(&x.to_string());
                    }
                    out.push(']');
                }
                // Boolean splices are rejected at construction by the
                // parser; render them defensively if built by hand.
                Segment::Splice(Term::Bool(t)) => {
                    out.push_str(if t.eval(env)? { "True" } else { "False" })
                }
            }
        }
        Ok(out)
    }

    pub fn for_each_term(&self, f: &mut impl FnMut(&Term)) {
        for seg in &self.segments {
            if let Segment::Splice(t) = seg {
                f(t);
            }
        }
    }

    pub fn for_each_var(&self, f: &mut impl FnMut(&Varname)) {
        self.for_each_term(&mut |t| t.for_each_var(f));
    }
}

impl fmt::Display for OutputPattern {
    /// Surface syntax: `skip` for the empty pattern, otherwise a quoted
    /// string with `{term}` splices.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("skip");
        }
        f.write_str("\"")?;
        for seg in &self.segments {
            match seg {
                Segment::Text(t) => f.write_str(t)?,
                Segment::Splice(t) => write!(f, "{{{t}}}")?,
            }
        }
        f.write_str("\"")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    #[test]
    fn adjacent_literals_merge() {
        let p = OutputPattern::new([
            Segment::Text("a".into()),
            Segment::Text("".into()),
            Segment::Text("b".into()),
        ]);
        assert_eq!(p.segments().len(), 1);
        assert_eq!(p, OutputPattern::text("ab"));
    }

    #[test]
    fn renders_decimal_splices() {
        let mut env = Environment::new();
        env.bind(var("x"));
        env.push(&var("x"), -5).unwrap();
        let p = OutputPattern::new([
            Segment::Text("v=".into()),
            Segment::Splice(Term::Int(IntTerm::current(var("x")))),
        ]);
        assert_eq!(p.render(&env).unwrap(), "v=-5");
    }

    #[test]
    fn renders_list_splices() {
        let mut env = Environment::new();
        env.bind(var("x"));
        env.push(&var("x"), 1).unwrap();
        env.push(&var("x"), 2).unwrap();
        let p = OutputPattern::splice_list(ListTerm::All(var("x")));
        assert_eq!(p.render(&env).unwrap(), "[1,2]");
        assert_eq!(p.to_string(), "\"{all(x)}\"");
    }

    #[test]
    fn empty_pattern_is_skip() {
        assert!(OutputPattern::empty().is_empty());
        assert_eq!(OutputPattern::empty().to_string(), "skip");
        assert!(OutputPattern::text("").is_empty());
    }
}
