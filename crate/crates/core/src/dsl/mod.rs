//! Textual surface syntax for specifications: parser, pretty-printer, and
//! the `.iospec` file format.
//!
//! Grammar (whitespace-insensitive outside pattern literals):
//!
//! ```text
//! spec     := stmt*
//! stmt     := "read" IDENT ":" valueset
//!           | "write" "[" pattern ("|" pattern)* "]"
//!           | "if" "(" term ")" "then" "{" spec "}" "else" "{" spec "}"
//!           | "loop" "{" spec "}"
//!           | "exit"
//! valueset := "ints" | "nats" | "range" "(" INT "," INT ")"
//! pattern  := STRING-with-{term}-splices | "skip"
//! term     := expression over all(v), curr(v), len/sum/prod, integer
//!             literals, + - *, == /= < <= > >=, && || not, parentheses
//! ```
//!
//! There is no `nop` keyword; the empty block (or file) is the empty
//! specification. `if (c) then {A} else {B}` reads conventionally: `A` is
//! required when `c` holds.

mod lexer;
mod parser;
mod printer;

use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::spec::{well_formed, Spec, Violation};

pub use printer::print_spec;

/// A syntax error with its 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: u32,
    pub column: u32,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Parse failure: either the text is not syntactically a specification, or
/// it is but breaks a well-formedness invariant.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{0}")]
    Syntax(ParseError),
    #[error("ill-formed specification: {}", format_violations(.0))]
    WellFormedness(Vec<Violation>),
}

fn format_violations(vs: &[Violation]) -> String {
    vs.iter()
        .map(Violation::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

/// Parses source text into a canonical, well-formed specification.
pub fn parse_spec(src: &str) -> Result<Spec, DslError> {
    let spec = parser::parse(src).map_err(DslError::Syntax)?.normalize();
    well_formed(&spec).map_err(DslError::WellFormedness)?;
    Ok(spec)
}

/// Parses without the well-formedness gate; violations stay in the tree.
pub fn parse_spec_unchecked(src: &str) -> Result<Spec, ParseError> {
    parser::parse(src).map(Spec::normalize)
}

impl Serialize for Spec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&print_spec(self))
    }
}

impl<'de> Deserialize<'de> for Spec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Spec, D::Error> {
        let src = String::deserialize(deserializer)?;
        parse_spec(&src).map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::{BoolTerm, CmpOp, IntTerm, OutputPattern, ValueSet, Varname, ViolationKind};

    fn var(s: &str) -> Varname {
        Varname::new(s).unwrap()
    }

    fn example_spec() -> Spec {
        Spec::sequence([
            Spec::Read(var("n"), ValueSet::Nats),
            Spec::till_exit(Spec::branch(
                BoolTerm::cmp(
                    CmpOp::Eq,
                    IntTerm::length_of(var("x")),
                    IntTerm::current(var("n")),
                ),
                Spec::Read(var("x"), ValueSet::Ints),
                Spec::Exit,
            )),
            Spec::write_one(OutputPattern::splice(IntTerm::sum_of(var("x")))),
        ])
    }

    const EXAMPLE_TEXT: &str = "read n : nats\n\
                                loop {\n  \
                                  if (len(all(x)) == curr(n)) then { exit } else { read x : ints }\n\
                                }\n\
                                write [\"{sum(all(x))}\"]\n";

    #[test]
    fn parses_the_example_source() {
        assert_eq!(parse_spec(EXAMPLE_TEXT).unwrap(), example_spec());
    }

    #[test]
    fn prints_the_example_canonically() {
        assert_eq!(print_spec(&example_spec()), EXAMPLE_TEXT);
    }

    #[test]
    fn print_is_idempotent_on_canonical_text() {
        let parsed = parse_spec(EXAMPLE_TEXT).unwrap();
        assert_eq!(print_spec(&parsed), EXAMPLE_TEXT);
    }

    #[test]
    fn empty_source_is_nop() {
        assert_eq!(parse_spec("").unwrap(), Spec::Nop);
        assert_eq!(parse_spec("   \n\t ").unwrap(), Spec::Nop);
        assert_eq!(print_spec(&Spec::Nop), "");
    }

    #[test]
    fn bare_exit_is_a_well_formedness_error() {
        match parse_spec("exit") {
            Err(DslError::WellFormedness(vs)) => {
                assert_eq!(vs[0].kind, ViolationKind::ExitOutsideLoop);
            }
            other => panic!("unexpected result: {other:?}"),
        }
    }

    #[test]
    fn unbound_variable_is_reported_after_parsing() {
        match parse_spec("write [\"{curr(z)}\"]") {
            Err(DslError::WellFormedness(vs)) => {
                assert_eq!(vs[0].kind, ViolationKind::UnboundVariable(var("z")));
            }
            other => panic!("unexpected result: {other:?}"),
        }
    }

    #[test]
    fn kind_errors_carry_positions() {
        match parse_spec("if (1 + 2) then { } else { }") {
            Err(DslError::Syntax(e)) => {
                assert_eq!(e.line, 1);
                assert!(e.message.contains("boolean"), "{}", e.message);
            }
            other => panic!("unexpected result: {other:?}"),
        }
        assert!(parse_spec("read n : ints\nwrite [\"{curr(n) == 1}\"]").is_err());
        assert!(parse_spec("read n : ints\nwrite [\"{sum(curr(n))}\"]").is_err());
    }

    #[test]
    fn splice_positions_point_into_the_line() {
        let src = "read n : ints\nwrite [\"{curr(n) +}\"]";
        match parse_spec(src) {
            Err(DslError::Syntax(e)) => assert_eq!(e.line, 2),
            other => panic!("unexpected result: {other:?}"),
        }
    }

    #[test]
    fn write_alternatives_and_skip() {
        let s = parse_spec("read n : ints\nwrite [\"{curr(n)}\" | skip | \"done\"]").unwrap();
        match s.stmts()[1] {
            Spec::Write(alts) => {
                assert_eq!(alts.len(), 3);
                assert!(alts[1].is_empty());
            }
            other => panic!("unexpected stmt {other:?}"),
        }
    }

    #[test]
    fn multiline_blocks_print_and_reparse() {
        let s = Spec::sequence([
            Spec::Read(var("a"), ValueSet::Range(-3, 7)),
            Spec::branch(
                BoolTerm::cmp(CmpOp::Lt, IntTerm::current(var("a")), IntTerm::lit(0)),
                Spec::sequence([
                    Spec::Read(var("b"), ValueSet::Ints),
                    Spec::write_one(OutputPattern::splice(IntTerm::current(var("b")))),
                ]),
                Spec::write_one(OutputPattern::text("neg")),
            ),
        ]);
        let text = print_spec(&s);
        assert_eq!(parse_spec(&text).unwrap(), s);
        assert_eq!(print_spec(&parse_spec(&text).unwrap()), text);
    }

    #[test]
    fn nested_loop_round_trip() {
        let src = "loop {\n  read a : ints\n  loop { exit }\n  if (curr(a) == 0) then { exit } else { }\n}\n";
        let s = parse_spec(src).unwrap();
        assert_eq!(print_spec(&s), src);
    }

    #[test]
    fn serde_embeds_canonical_text() {
        let json = serde_json::to_string(&example_spec()).unwrap();
        let back: Spec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, example_spec());
    }
}
