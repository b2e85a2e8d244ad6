//! Lowering specifications to an imperative IR, rendering the IR as program
//! text in two surface syntaxes (with optional holes), and interpreting the
//! IR directly.

pub mod interp;
pub mod ir;
pub mod lower;
pub mod render;

use rand::Rng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::spec::Spec;

pub use interp::interpret_ir;
pub use ir::{IrExpr, IrStmt, PrintPiece, ProgramIr, StateVar, Style};
pub use lower::{lower_to_ir, StyleUnsupported};
pub use render::{
    render_program, render_with_holes, HolePolicy, HoledProgram, RenderError, RenderTarget,
    Surface, HOLE,
};

/// A complete Haskell-like program fulfilling the specification. Picks a
/// random style (fold-state where the fold catalog covers the spec) and
/// random cosmetic naming.
pub fn haskell_program(spec: &Spec, rng: &mut ChaCha12Rng) -> String {
    let ir = random_style_ir(spec, rng);
    render_program(
        &ir,
        &RenderTarget {
            surface: Surface::HaskellLike,
            holes: HolePolicy::NoHoles,
        },
        rng,
    )
}

/// A complete Python-like program fulfilling the specification, in
/// list-accumulation style. Seed-invariant.
pub fn python_program(spec: &Spec, rng: &mut ChaCha12Rng) -> String {
    let ir = lower_to_ir(spec, Style::ListAccum).expect("list accumulation is total");
    render_program(
        &ir,
        &RenderTarget {
            surface: Surface::PythonLike,
            holes: HolePolicy::NoHoles,
        },
        rng,
    )
}

/// A Haskell-like skeleton with `???` holes over reads and prints.
pub fn haskell_with_holes(spec: &Spec, rng: &mut ChaCha12Rng) -> Result<HoledProgram, RenderError> {
    let ir = random_style_ir(spec, rng);
    render_with_holes(
        &ir,
        &RenderTarget {
            surface: Surface::HaskellLike,
            holes: HolePolicy::ReadsAndPrints,
        },
        rng,
    )
}

fn random_style_ir(spec: &Spec, rng: &mut ChaCha12Rng) -> ProgramIr {
    if let Ok(fold) = lower_to_ir(spec, Style::FoldState) {
        if rng.random_bool(0.5) {
            return fold;
        }
    }
    lower_to_ir(spec, Style::ListAccum).expect("list accumulation is total")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no textually distinct rendering found in {0} attempts")]
pub struct RetriesExhausted(pub u32);

const DISTINCT_RETRIES: u32 = 100;

/// Two textually distinct Haskell-like renderings, one per specification.
pub fn different_programs(
    s1: &Spec,
    s2: &Spec,
    rng: &mut ChaCha12Rng,
) -> Result<(String, String), RetriesExhausted> {
    let p1 = haskell_program(s1, rng);
    for _ in 0..DISTINCT_RETRIES {
        let p2 = haskell_program(s2, rng);
        if p2 != p1 {
            return Ok((p1, p2));
        }
    }
    Err(RetriesExhausted(DISTINCT_RETRIES))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_spec;
    use crate::semantics::{accept, interpret, sample_inputs, Limits};
    use rand::SeedableRng;

    fn example_spec() -> Spec {
        parse_spec(
            "read n : nats\n\
             loop {\n  if (len(all(x)) == curr(n)) then { exit } else { read x : ints }\n}\n\
             write [\"{sum(all(x))}\"]\n",
        )
        .unwrap()
    }

    fn rng(seed: u64) -> ChaCha12Rng {
        ChaCha12Rng::seed_from_u64(seed)
    }

    const PYTHON_GOLDEN: &str = "n = int(input())\n\
                                 x = []\n\
                                 while len(x) != n :\n  \
                                   v = int(input())\n  \
                                   x += [v]\n\
                                 print(sum(x))\n";

    #[test]
    fn python_list_accum_matches_the_listing() {
        let ir = lower_to_ir(&example_spec(), Style::ListAccum).unwrap();
        for seed in [0, 1, 42] {
            let text = render_program(
                &ir,
                &RenderTarget {
                    surface: Surface::PythonLike,
                    holes: HolePolicy::NoHoles,
                },
                &mut rng(seed),
            );
            assert_eq!(text, PYTHON_GOLDEN);
        }
    }

    #[test]
    fn fold_state_accumulators_for_the_example() {
        let ir = lower_to_ir(&example_spec(), Style::FoldState).unwrap();
        let names: Vec<&str> = ir.state.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, vec!["s", "l"]);
        assert_eq!(ir.state[0].init, IrExpr::Lit(0));
        assert_eq!(ir.state[1].init, IrExpr::Lit(0));
    }

    #[test]
    fn haskell_fold_state_shape() {
        let ir = lower_to_ir(&example_spec(), Style::FoldState).unwrap();
        let text = render_program(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        // readLn, a helper with two state parameters, print on exit.
        assert!(text.contains("<- readLn"), "{text}");
        assert!(text.contains("s l = do"), "{text}");
        assert!(text.contains("then print s"), "{text}");
        assert!(text.contains("(s + "), "{text}");
        assert!(text.contains("(l + 1)"), "{text}");
        assert!(text.ends_with(" 0 0\n"), "{text}");
    }

    #[test]
    fn haskell_list_accum_uses_append() {
        let ir = lower_to_ir(&example_spec(), Style::ListAccum).unwrap();
        let text = render_program(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        assert!(text.contains("++"), "{text}");
        assert!(text.contains("print (sum "), "{text}");
    }

    #[test]
    fn ir_interpretation_matches_the_paper_trace() {
        let limits = Limits::default();
        for style in [Style::FoldState, Style::ListAccum] {
            let ir = lower_to_ir(&example_spec(), style).unwrap();
            let t = interpret_ir(&ir, &[2, 1, 5], &limits).unwrap();
            assert_eq!(t.to_string(), "?2 ?1 ?5 !6 stop");
        }
    }

    #[test]
    fn styles_are_trace_equivalent() {
        let limits = Limits::default();
        for seed in 0..30u64 {
            let spec = crate::specgen::random_specification(&crate::specgen::GenConfig::new(seed));
            let list = lower_to_ir(&spec, Style::ListAccum).unwrap();
            let Ok(fold) = lower_to_ir(&spec, Style::FoldState) else {
                continue;
            };
            let mut r = rng(seed ^ 0xabc);
            for _ in 0..20 {
                let feed = sample_inputs(&spec, &mut r, &limits).unwrap();
                assert_eq!(
                    interpret_ir(&list, &feed, &limits),
                    interpret_ir(&fold, &feed, &limits)
                );
            }
        }
    }

    #[test]
    fn lowered_programs_fulfill_their_spec() {
        let limits = Limits::default();
        for seed in 0..30u64 {
            let spec = crate::specgen::random_specification(&crate::specgen::GenConfig::new(seed));
            let ir = lower_to_ir(&spec, Style::ListAccum).unwrap();
            let mut r = rng(seed ^ 0xdef);
            for _ in 0..20 {
                let feed = sample_inputs(&spec, &mut r, &limits).unwrap();
                let t = interpret_ir(&ir, &feed, &limits).unwrap();
                assert!(accept(&spec, &t, &limits), "{spec:?} {t}");
            }
        }
    }

    #[test]
    fn raw_sequence_splice_rejects_fold_state() {
        let spec = parse_spec("read x : ints\nwrite [\"{all(x)}\"]").unwrap();
        let err = lower_to_ir(&spec, Style::FoldState).unwrap_err();
        assert!(err.term.contains("all(x)"), "{}", err.term);
        // while the list style handles it
        let ir = lower_to_ir(&spec, Style::ListAccum).unwrap();
        let t = interpret_ir(&ir, &[3, 4], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?3 ![3] stop");
        assert_eq!(
            interpret(&spec, &[3], &Limits::default())
                .unwrap()
                .to_string(),
            "?3 ![3] stop"
        );
    }

    #[test]
    fn ir_runs_out_of_inputs() {
        let ir = lower_to_ir(&example_spec(), Style::ListAccum).unwrap();
        let err = interpret_ir(&ir, &[], &Limits::default()).unwrap_err();
        assert_eq!(err, crate::semantics::InterpretError::InputsExhausted);
    }

    #[test]
    fn nop_renders_as_a_no_op_program() {
        let ir = lower_to_ir(&Spec::Nop, Style::ListAccum).unwrap();
        let py = render_program(
            &ir,
            &RenderTarget {
                surface: Surface::PythonLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        assert_eq!(py, "pass\n");
        let hs = render_program(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        assert_eq!(hs, "main :: IO ()\nmain = return ()\n");
    }

    #[test]
    fn hole_restoration_is_exact() {
        for style in [Style::ListAccum, Style::FoldState] {
            for surface in [Surface::HaskellLike, Surface::PythonLike] {
                for holes in [HolePolicy::ReadsAndPrints, HolePolicy::LoopBody] {
                    let ir = lower_to_ir(&example_spec(), style).unwrap();
                    let full = render_program(
                        &ir,
                        &RenderTarget {
                            surface,
                            holes: HolePolicy::NoHoles,
                        },
                        &mut rng(9),
                    );
                    let holed =
                        render_with_holes(&ir, &RenderTarget { surface, holes }, &mut rng(9))
                            .unwrap();
                    assert!(!holed.omitted.is_empty());
                    let mut restored = holed.text.clone();
                    for fragment in &holed.omitted {
                        restored = restored.replacen(HOLE, fragment, 1);
                    }
                    assert_eq!(restored, full, "style {style:?} surface {surface:?}");
                }
            }
        }
    }

    #[test]
    fn hole_count_matches_reads_plus_prints() {
        let ir = lower_to_ir(&example_spec(), Style::FoldState).unwrap();
        let holed = render_with_holes(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::ReadsAndPrints,
            },
            &mut rng(1),
        )
        .unwrap();
        assert_eq!(
            holed.text.matches(HOLE).count(),
            ir.count_reads_and_prints()
        );
        assert_eq!(holed.omitted.len(), ir.count_reads_and_prints());
    }

    #[test]
    fn loop_hole_on_loop_free_program_fails() {
        let spec = parse_spec("read a : ints\nwrite [\"{curr(a)}\"]").unwrap();
        let ir = lower_to_ir(&spec, Style::ListAccum).unwrap();
        let err = render_with_holes(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::LoopBody,
            },
            &mut rng(0),
        )
        .unwrap_err();
        assert_eq!(err, RenderError::NoHolableConstruct);
    }

    /// Maps every non-keyword identifier to a positional token, so texts
    /// that differ only by naming normalize identically.
    fn alpha_normalize(text: &str) -> String {
        const FIXED: &[&str] = &[
            "main", "IO", "do", "readLn", "print", "putStrLn", "show", "if", "then", "else", "let",
            "sum", "product", "length", "last", "not", "return", "import", "math", "True", "False",
            "pass", "while", "break", "int", "input", "str", "and", "or", "prod", "len",
        ];
        let mut map: std::collections::HashMap<String, String> = Default::default();
        let mut out = String::new();
        let mut ident = String::new();
        for c in text.chars().chain([' ']) {
            if c.is_ascii_alphanumeric() || c == '_' {
                ident.push(c);
                continue;
            }
            if !ident.is_empty() {
                if FIXED.contains(&ident.as_str()) || ident.chars().all(|c| c.is_ascii_digit()) {
                    out.push_str(&ident);
                } else {
                    let next = format!("id{}", map.len());
                    out.push_str(map.entry(std::mem::take(&mut ident)).or_insert(next));
                }
                ident.clear();
            }
            out.push(c);
        }
        out
    }

    #[test]
    fn cosmetic_seeds_only_rename() {
        for style in [Style::FoldState, Style::ListAccum] {
            let ir = lower_to_ir(&example_spec(), style).unwrap();
            let target = RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            };
            let base = render_program(&ir, &target, &mut rng(0));
            let mut seen_distinct = false;
            for seed in 1..20 {
                let other = render_program(&ir, &target, &mut rng(seed));
                seen_distinct |= other != base;
                assert_eq!(
                    alpha_normalize(&base),
                    alpha_normalize(&other),
                    "seed {seed} style {style:?}"
                );
            }
            assert!(seen_distinct, "no cosmetic variation across seeds");
        }
    }

    #[test]
    fn loop_free_programs_still_vary_cosmetically() {
        let spec = parse_spec(
            "read a : ints\nread b : ints\nif (curr(a) == curr(b)) then { write [\"{curr(a)}\"] } else { write [\"{curr(b)}\"] }\n",
        )
        .unwrap();
        let mut r = rng(11);
        let (p1, p2) = different_programs(&spec, &spec, &mut r).unwrap();
        assert_ne!(p1, p2);
    }

    #[test]
    fn different_programs_differ_textually() {
        let spec = example_spec();
        let (p1, p2) = different_programs(&spec, &spec, &mut rng(5)).unwrap();
        assert_ne!(p1, p2);
    }

    #[test]
    fn different_programs_exhausts_on_nop() {
        let err = different_programs(&Spec::Nop, &Spec::Nop, &mut rng(5)).unwrap_err();
        assert_eq!(err, RetriesExhausted(DISTINCT_RETRIES));
    }

    #[test]
    fn compound_splices_parenthesize_in_print_position() {
        let spec = parse_spec(
            "read a : ints\nread b : ints\nwrite [\"{(curr(a) + curr(b)) * (curr(a) - curr(b))}\"]\n",
        )
        .unwrap();
        let ir = lower_to_ir(&spec, Style::FoldState).unwrap();
        let hs = render_program(
            &ir,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(2),
        );
        assert!(
            alpha_normalize(&hs).contains("print ((id0 + id1) * (id0 - id1))"),
            "{hs}"
        );
        let t = interpret_ir(&ir, &[5, 3], &Limits::default()).unwrap();
        assert_eq!(t.to_string(), "?5 ?3 !16 stop");
    }

    #[test]
    fn branch_output_specs_render_in_both_surfaces() {
        let spec = parse_spec(
            "read a : ints\nread b : nats\nif (curr(a) < curr(b)) then { write [\"{curr(a) + curr(b)}\"] } else { write [\"{curr(a) - curr(b)}\"] }\n",
        )
        .unwrap();
        let fold = lower_to_ir(&spec, Style::FoldState).unwrap();
        let hs = render_program(
            &fold,
            &RenderTarget {
                surface: Surface::HaskellLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        assert!(alpha_normalize(&hs).contains("if id0 < id1"), "{hs}");
        let list = lower_to_ir(&spec, Style::ListAccum).unwrap();
        let py = render_program(
            &list,
            &RenderTarget {
                surface: Surface::PythonLike,
                holes: HolePolicy::NoHoles,
            },
            &mut rng(0),
        );
        assert!(py.contains("if a < b :"), "{py}");
        let limits = Limits::default();
        assert_eq!(
            interpret_ir(&fold, &[4, 9], &limits).unwrap().to_string(),
            "?4 ?9 !13 stop"
        );
        assert_eq!(
            interpret_ir(&list, &[9, 4], &limits).unwrap().to_string(),
            "?9 ?4 !5 stop"
        );
    }
}
