//! Canonical pretty-printer for specifications. Output always parses back
//! to the same (canonical) tree, and canonical text survives a
//! print-parse-print cycle byte for byte.

use crate::spec::Spec;

const INDENT: &str = "  ";

/// Renders the canonical surface syntax of `spec`. The empty specification
/// prints as the empty string; everything else ends with a newline.
pub fn print_spec(spec: &Spec) -> String {
    let mut out = String::new();
    let canonical = spec.clone().normalize();
    print_stmts(&canonical, 0, &mut out);
    out
}

fn print_stmts(spec: &Spec, depth: usize, out: &mut String) {
    for stmt in spec.stmts() {
        print_stmt(stmt, depth, out);
    }
}

fn print_stmt(stmt: &Spec, depth: usize, out: &mut String) {
    for _ in 0..depth {
        out.push_str(INDENT);
    }
    match stmt {
        Spec::Nop => {
            // Unreachable for canonical trees; keep the line out entirely.
            out.pop();
        }
        Spec::Read(var, vs) => {
            out.push_str(&format!("read {var} : {vs}\n"));
        }
        Spec::Write(alts) => {
            out.push_str("write [");
            for (i, alt) in alts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                out.push_str(&alt.to_string());
            }
            out.push_str("]\n");
        }
        Spec::Exit => out.push_str("exit\n"),
        Spec::Branch {
            cond,
            when_false,
            when_true,
        } => {
            if inline_block(when_true).is_some() && inline_block(when_false).is_some() {
                out.push_str(&format!(
                    "if ({cond}) then {} else {}\n",
                    inline_block(when_true).unwrap(),
                    inline_block(when_false).unwrap()
                ));
            } else {
                out.push_str(&format!("if ({cond}) then {{\n"));
                print_stmts(when_true, depth + 1, out);
                for _ in 0..depth {
                    out.push_str(INDENT);
                }
                out.push_str("} else {\n");
                print_stmts(when_false, depth + 1, out);
                for _ in 0..depth {
                    out.push_str(INDENT);
                }
                out.push_str("}\n");
            }
        }
        Spec::Loop(body) => match inline_block(body) {
            Some(block) if !matches!(body.as_ref(), Spec::Nop) => {
                out.push_str(&format!("loop {block}\n"));
            }
            _ => {
                out.push_str("loop {\n");
                print_stmts(body, depth + 1, out);
                for _ in 0..depth {
                    out.push_str(INDENT);
                }
                out.push_str("}\n");
            }
        },
        Spec::Seq(..) => {
            // A canonical statement list never contains Seq directly; the
            // flattening in stmts() unrolled it already.
            unreachable!("Seq inside statement position");
        }
    }
}

/// The single-line rendering of a block, when the block is empty or a
/// single atomic statement.
fn inline_block(spec: &Spec) -> Option<String> {
    match spec {
        Spec::Nop => Some("{ }".to_string()),
        Spec::Read(..) | Spec::Write(..) | Spec::Exit => {
            let mut inner = String::new();
            print_stmt(spec, 0, &mut inner);
            inner.pop();
            Some(format!("{{ {inner} }}"))
        }
        _ => None,
    }
}
