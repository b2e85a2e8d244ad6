//! Command-line front end: generation, rendering, trace checking, task
//! creation and grading, program testing, and a one-shot practice loop.
//!
//! Exit codes: 0 success/pass, 1 check failed, 2 usage or parse error,
//! 3 runtime error (timeouts, generation failures, I/O).

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use iospec::codegen::{
    lower_to_ir, render_program, render_with_holes, HolePolicy, RenderTarget, Style, Surface,
};
use iospec::dsl::{parse_spec, print_spec, DslError};
use iospec::harness::{fulfills, CandidateProgram, ExternalCommand, FulfillsConfig};
use iospec::semantics::{accept, example_traces, Limits, Trace};
use iospec::spec::Spec;
use iospec::specgen::{random_specification, similar_specifications, GenConfig};
use iospec::taskgen::{
    builtin_template, check_solution, generate_task_instance, CheckConfig, Require, Solution,
    TaskInstance, TestResult,
};

const EXIT_PASS: i32 = 0;
const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_RUNTIME: i32 = 3;

#[derive(Parser)]
#[command(name = "iospec", version, about = "Console-I/O specification toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate specifications.
    Gen {
        #[command(subcommand)]
        what: GenWhat,
    },
    /// Render a specification as program text.
    Render {
        /// Specification file (.iospec).
        file: PathBuf,
        #[arg(long, value_enum)]
        style: StyleArg,
        #[arg(long, value_enum)]
        lang: LangArg,
        #[arg(long, value_enum, default_value = "none")]
        holes: HolesArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print example traces of a specification.
    Traces {
        file: PathBuf,
        #[arg(short = 'n', default_value_t = 5)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check one trace against a specification.
    Accept {
        file: PathBuf,
        #[arg(long)]
        trace: String,
    },
    /// Create and grade task bundles.
    Task {
        #[command(subcommand)]
        what: TaskWhat,
    },
    /// Property-test an external program against a specification.
    TestProgram {
        file: PathBuf,
        #[arg(short = 'n', default_value_t = 100)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Per-run timeout in milliseconds.
        #[arg(long, default_value_t = 5000)]
        timeout: u64,
        /// Candidate command and arguments.
        #[arg(last = true, required = true)]
        command: Vec<String>,
    },
    /// Print one task, read one answer from standard input, grade it.
    Practice {
        name: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum GenWhat {
    /// One random specification.
    Spec {
        #[arg(long)]
        seed: u64,
        /// Complexity hint.
        #[arg(long)]
        size: Option<u32>,
    },
    /// A similar pair plus a distinguishing input feed.
    Pair {
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum TaskWhat {
    /// Instantiate a template into question.txt and requirement.json.
    New {
        name: String,
        #[arg(long)]
        seed: u64,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Grade an answer against a task bundle.
    Check {
        dir: PathBuf,
        /// Inline answer text.
        #[arg(long)]
        answer: Option<String>,
        /// File containing the answer (code answers, long traces).
        #[arg(long)]
        answer_file: Option<PathBuf>,
        /// Candidate command for program answers.
        #[arg(last = true)]
        command: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    List,
    Fold,
}

#[derive(Clone, Copy, ValueEnum)]
enum LangArg {
    Haskell,
    Python,
}

#[derive(Clone, Copy, ValueEnum)]
enum HolesArg {
    None,
    Io,
    Loop,
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(cli));
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Gen { what } => gen(what),
        Command::Render {
            file,
            style,
            lang,
            holes,
            seed,
        } => render(&file, style, lang, holes, seed),
        Command::Traces { file, count, seed } => traces(&file, count, seed),
        Command::Accept { file, trace } => accept_cmd(&file, &trace),
        Command::Task { what } => match what {
            TaskWhat::New { name, seed, out } => task_new(&name, seed, &out),
            TaskWhat::Check {
                dir,
                answer,
                answer_file,
                command,
            } => task_check(&dir, answer.as_deref(), answer_file.as_deref(), &command),
        },
        Command::TestProgram {
            file,
            count,
            seed,
            timeout,
            command,
        } => test_program(&file, count, seed, timeout, &command),
        Command::Practice { name, seed } => practice(&name, seed),
    }
}

fn gen(what: GenWhat) -> i32 {
    match what {
        GenWhat::Spec { seed, size } => {
            let mut cfg = GenConfig::new(seed);
            if let Some(size) = size {
                cfg.size_hint = size;
            }
            print!("{}", print_spec(&random_specification(&cfg)));
            EXIT_PASS
        }
        GenWhat::Pair { seed } => match similar_specifications(&GenConfig::new(seed)) {
            Ok(pair) => {
                print!("{}", print_spec(&pair.first));
                println!("---");
                print!("{}", print_spec(&pair.second));
                println!("---");
                let witness: Vec<String> = pair.witness.iter().map(i64::to_string).collect();
                println!("witness: {}", witness.join(" "));
                EXIT_PASS
            }
            Err(e) => runtime_error(e),
        },
    }
}

fn load_spec(file: &Path) -> Result<Spec, i32> {
    let src = match fs::read_to_string(file) {
        Ok(src) => src,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return Err(EXIT_RUNTIME);
        }
    };
    parse_spec(&src).map_err(|e| {
        match e {
            DslError::Syntax(e) => eprintln!("error: {}: {e}", file.display()),
            DslError::WellFormedness(_) => eprintln!("error: {}: {e}", file.display()),
        }
        EXIT_USAGE
    })
}

fn render(file: &Path, style: StyleArg, lang: LangArg, holes: HolesArg, seed: u64) -> i32 {
    let spec = match load_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let style = match style {
        StyleArg::List => Style::ListAccum,
        StyleArg::Fold => Style::FoldState,
    };
    let ir = match lower_to_ir(&spec, style) {
        Ok(ir) => ir,
        Err(e) => return runtime_error(e),
    };
    let target = RenderTarget {
        surface: match lang {
            LangArg::Haskell => Surface::HaskellLike,
            LangArg::Python => Surface::PythonLike,
        },
        holes: match holes {
            HolesArg::None => HolePolicy::NoHoles,
            HolesArg::Io => HolePolicy::ReadsAndPrints,
            HolesArg::Loop => HolePolicy::LoopBody,
        },
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    if target.holes == HolePolicy::NoHoles {
        print!("{}", render_program(&ir, &target, &mut rng));
        EXIT_PASS
    } else {
        match render_with_holes(&ir, &target, &mut rng) {
            Ok(holed) => {
                print!("{}", holed.text);
                EXIT_PASS
            }
            Err(e) => runtime_error(e),
        }
    }
}

fn traces(file: &Path, count: usize, seed: u64) -> i32 {
    let spec = match load_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    match example_traces(&spec, count, &mut rng, &Limits::default()) {
        Ok(traces) => {
            for t in traces {
                println!("{t}");
            }
            EXIT_PASS
        }
        Err(e) => runtime_error(e),
    }
}

fn accept_cmd(file: &Path, trace_text: &str) -> i32 {
    let spec = match load_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let trace: Trace = match trace_text.parse() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: invalid trace: {e}");
            return EXIT_USAGE;
        }
    };
    if accept(&spec, &trace, &Limits::default()) {
        println!("accepted");
        EXIT_PASS
    } else {
        println!("rejected");
        EXIT_FAIL
    }
}

fn task_new(name: &str, seed: u64, out: &Path) -> i32 {
    let template = match builtin_template(name) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let instance = match generate_task_instance(&template, seed) {
        Ok(instance) => instance,
        Err(e) => return runtime_error(e),
    };
    let requirement = match serde_json::to_string_pretty(&instance.requires) {
        Ok(json) => json + "\n",
        Err(e) => return runtime_error(e),
    };
    if let Err(e) = fs::create_dir_all(out)
        .and_then(|()| fs::write(out.join("question.txt"), &instance.question))
        .and_then(|()| fs::write(out.join("requirement.json"), requirement))
    {
        eprintln!("error: cannot write task bundle: {e}");
        return EXIT_RUNTIME;
    }
    eprintln!("wrote {}", out.display());
    EXIT_PASS
}

fn load_task(dir: &Path) -> Result<TaskInstance, i32> {
    let question = fs::read_to_string(dir.join("question.txt")).map_err(|e| {
        eprintln!("error: cannot read question.txt: {e}");
        EXIT_RUNTIME
    })?;
    let json = fs::read_to_string(dir.join("requirement.json")).map_err(|e| {
        eprintln!("error: cannot read requirement.json: {e}");
        EXIT_RUNTIME
    })?;
    let requires: Require = serde_json::from_str(&json).map_err(|e| {
        eprintln!("error: invalid requirement.json: {e}");
        EXIT_USAGE
    })?;
    Ok(TaskInstance { question, requires })
}

/// Parses the answer into the solution kind the requirement grades.
fn parse_answer(
    requires: &Require,
    text: Option<&str>,
    command: &[String],
    timeout: u64,
) -> Result<Solution, String> {
    let text = text.map(str::trim);
    let external = || -> Result<CandidateProgram, String> {
        if command.is_empty() {
            return Err("this task needs a candidate command: pass `-- CMD ARGS...`".into());
        }
        let mut cmd = ExternalCommand::new(command[0].clone(), command[1..].to_vec());
        cmd.timeout_millis = timeout;
        Ok(CandidateProgram::External(cmd))
    };
    match requires {
        Require::ExactInteger { .. } => {
            let text = text.ok_or("this task expects an integer answer")?;
            text.parse()
                .map(Solution::Int)
                .map_err(|_| format!("not an integer: {text:?}"))
        }
        Require::ExactTrace { expected } => match text {
            Some(text) => text
                .parse()
                .map(Solution::Trace)
                .map_err(|e| format!("invalid trace: {e}")),
            // A candidate command answers an exact-trace task by being run
            // on the expected trace's inputs under the line-based model.
            None => {
                let candidate = external()?;
                let feed = expected.inputs();
                match iospec::harness::run_candidate(&candidate, &feed, &Limits::default()) {
                    Ok(t) => Ok(Solution::Trace(reconcile_with(expected, &t))),
                    Err(e) => Err(format!("candidate failed: {e}")),
                }
            }
        },
        Require::SampleTrace { .. } => {
            let text = text.ok_or("this task expects a trace answer")?;
            text.parse()
                .map(Solution::Trace)
                .map_err(|e| format!("invalid trace: {e}"))
        }
        Require::ExactIndexSet { .. } => {
            let text = text.ok_or("this task expects comma-separated indices")?;
            let mut indices = Vec::new();
            for part in text.split(',') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                indices.push(
                    part.parse()
                        .map_err(|_| format!("not an index: {part:?}"))?,
                );
            }
            Ok(Solution::Indices(indices))
        }
        Require::ExactBool { .. } => {
            let text = text.ok_or("this task expects yes or no")?;
            match text.to_ascii_lowercase().as_str() {
                "yes" => Ok(Solution::Bool(true)),
                "no" => Ok(Solution::Bool(false)),
                other => Err(format!("expected yes or no, got {other:?}")),
            }
        }
        Require::TriggeringDifference { .. } => {
            let text = text.ok_or("this task expects whitespace-separated integers")?;
            let mut inputs = Vec::new();
            for part in text.split_whitespace() {
                inputs.push(
                    part.parse()
                        .map_err(|_| format!("not an integer: {part:?}"))?,
                );
            }
            Ok(Solution::Inputs(inputs))
        }
        Require::Behavior { .. } | Require::ProducingTraces { .. } => {
            external().map(Solution::Program)
        }
        Require::NoSubstring { .. } | Require::AlwaysPass => {
            let text = text.ok_or("this task expects a code answer")?;
            Ok(Solution::Code(text.to_string()))
        }
        Require::Conjunction { .. } => {
            // Program-plus-code tasks: the command is the runnable
            // candidate, the answer text its source.
            let code = text.ok_or(
                "this task expects both the solution code (--answer-file) and a candidate command (-- CMD)",
            )?;
            let program = external()?;
            Ok(Solution::pair(
                Solution::Program(program),
                Solution::Code(code.to_string()),
            ))
        }
    }
}

/// Under the line-based console model an external run only observes input
/// and output streams; if they match the expected trace, the interleaving
/// is taken from it.
fn reconcile_with(expected: &Trace, produced: &Trace) -> Trace {
    if produced.inputs() == expected.inputs() && produced.outputs() == expected.outputs() {
        expected.clone()
    } else {
        produced.clone()
    }
}

fn task_check(
    dir: &Path,
    answer: Option<&str>,
    answer_file: Option<&Path>,
    command: &[String],
) -> i32 {
    let task = match load_task(dir) {
        Ok(task) => task,
        Err(code) => return code,
    };
    let from_file = match answer_file {
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", path.display());
                return EXIT_RUNTIME;
            }
        },
        None => None,
    };
    let text = from_file.as_deref().or(answer);
    let solution = match parse_answer(&task.requires, text, command, 5000) {
        Ok(solution) => solution,
        Err(message) => {
            eprintln!("error: {message}");
            return EXIT_USAGE;
        }
    };
    report_result(check_solution(
        &task.requires,
        &solution,
        &CheckConfig::default(),
    ))
}

fn report_result(result: Result<TestResult, iospec::taskgen::CheckError>) -> i32 {
    match result {
        Ok(result) if result.passed => {
            println!("{}", result.message);
            EXIT_PASS
        }
        Ok(result) => {
            eprintln!("*** Failed! {}", result.message);
            EXIT_FAIL
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn test_program(file: &Path, count: u32, seed: u64, timeout: u64, command: &[String]) -> i32 {
    let spec = match load_spec(file) {
        Ok(spec) => spec,
        Err(code) => return code,
    };
    let mut cmd = ExternalCommand::new(command[0].clone(), command[1..].to_vec());
    cmd.timeout_millis = timeout;
    let config = FulfillsConfig {
        n_tests: count,
        seed,
        limits: Limits::default(),
    };
    match fulfills(&CandidateProgram::External(cmd), &spec, &config) {
        Ok(report) => {
            if let Some(failure) = report.first_failure {
                let feed: Vec<String> = failure.feed.iter().map(i64::to_string).collect();
                eprintln!(
                    "*** Failed! Falsified (after {} of {} tests):",
                    report.total, config.n_tests
                );
                eprintln!("inputs: {}", feed.join(" "));
                eprintln!("actual: {}", failure.actual);
                EXIT_FAIL
            } else {
                println!("+++ OK, passed {} tests.", report.total);
                EXIT_PASS
            }
        }
        Err(e) => runtime_error(e),
    }
}

fn practice(name: &str, seed: u64) -> i32 {
    let template = match builtin_template(name) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let instance = match generate_task_instance(&template, seed) {
        Ok(instance) => instance,
        Err(e) => return runtime_error(e),
    };
    println!("{}", instance.question);
    print!("> ");
    let _ = std::io::stdout().flush();
    let mut line = String::new();
    if std::io::stdin().lock().read_line(&mut line).is_err() {
        eprintln!("error: cannot read the answer");
        return EXIT_RUNTIME;
    }
    let line = line.trim();
    // Program answers arrive as a command line.
    let (text, command): (Option<&str>, Vec<String>) = match &instance.requires {
        Require::Behavior { .. } | Require::ProducingTraces { .. } => {
            (None, line.split_whitespace().map(str::to_string).collect())
        }
        _ => (Some(line), vec![]),
    };
    let solution = match parse_answer(&instance.requires, text, &command, 5000) {
        Ok(solution) => solution,
        Err(message) => {
            eprintln!("error: {message}");
            return EXIT_USAGE;
        }
    };
    report_result(check_solution(
        &instance.requires,
        &solution,
        &CheckConfig::default(),
    ))
}

fn runtime_error(e: impl std::fmt::Display) -> i32 {
    eprintln!("error: {e}");
    EXIT_RUNTIME
}
