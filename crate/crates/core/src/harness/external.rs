//! Spawning and supervising external console candidates.

use std::io::{BufRead, BufReader, Write};
use std::process::{Child, Command, Stdio};
use std::thread;
use std::time::{Duration, Instant};

use super::RunError;

/// How inputs reach the candidate's standard input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputPacing {
    /// All values written as one newline-separated block, then stdin is
    /// closed. Reliable for batch console programs.
    #[default]
    Eager,
    /// Values written one line at a time with flushes, stdin held open for
    /// a grace period after the last value. A candidate that dies at the
    /// eventual end-of-input is reported as having requested extra input.
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalCommand {
    pub command: String,
    pub args: Vec<String>,
    pub timeout_millis: u64,
    pub pacing: InputPacing,
}

impl ExternalCommand {
    pub fn new(command: impl Into<String>, args: Vec<String>) -> ExternalCommand {
        ExternalCommand {
            command: command.into(),
            args,
            timeout_millis: 5000,
            pacing: InputPacing::Eager,
        }
    }
}

const POLL_INTERVAL: Duration = Duration::from_millis(5);

/// Runs the candidate on the feed and collects its standard output lines.
/// Trailing carriage returns are stripped and a final empty line ignored.
pub fn run_external(cmd: &ExternalCommand, feed: &[i64]) -> Result<Vec<String>, RunError> {
    if cmd.command.is_empty() {
        return Err(RunError::Io("empty candidate command".into()));
    }
    let mut child = Command::new(&cmd.command)
        .args(&cmd.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|e| RunError::Io(format!("failed to spawn {}: {e}", cmd.command)))?;

    let stdout = child.stdout.take().expect("stdout is piped");
    let reader = thread::spawn(move || {
        let mut lines = Vec::new();
        for line in BufReader::new(stdout).lines() {
            match line {
                Ok(mut l) => {
                    while l.ends_with('\r') {
                        l.pop();
                    }
                    lines.push(l);
                }
                Err(_) => break,
            }
        }
        lines
    });

    let deadline = Instant::now() + Duration::from_millis(cmd.timeout_millis);
    let result = drive(&mut child, cmd, feed, deadline);

    let lines = match reader.join() {
        Ok(mut lines) => {
            if lines.last().is_some_and(String::is_empty) {
                lines.pop();
            }
            lines
        }
        Err(_) => return Err(RunError::Io("output reader panicked".into())),
    };
    result.map(|()| lines)
}

fn drive(
    child: &mut Child,
    cmd: &ExternalCommand,
    feed: &[i64],
    deadline: Instant,
) -> Result<(), RunError> {
    let mut stdin = child.stdin.take().expect("stdin is piped");
    let mut fed_at_eof = false;

    match cmd.pacing {
        InputPacing::Eager => {
            let block: String = feed.iter().map(|v| format!("{v}\n")).collect();
            // A candidate that exits early stops reading; that is its
            // prerogative, not an I/O failure.
            let _ = stdin.write_all(block.as_bytes());
            drop(stdin);
        }
        InputPacing::Strict => {
            for v in feed {
                if writeln!(stdin, "{v}").and_then(|()| stdin.flush()).is_err() {
                    break;
                }
                thread::sleep(Duration::from_millis(2));
            }
            // Hold stdin open briefly; a candidate that is done computing
            // exits here, one that wants more input blocks on the read.
            let grace = Duration::from_millis((cmd.timeout_millis / 2).min(500));
            let grace_end = Instant::now() + grace;
            loop {
                if let Some(status) = try_wait(child)? {
                    return finish(status, false);
                }
                if Instant::now() >= grace_end {
                    fed_at_eof = true;
                    break;
                }
                thread::sleep(POLL_INTERVAL);
            }
            drop(stdin);
        }
    }

    loop {
        if let Some(status) = try_wait(child)? {
            return finish(status, fed_at_eof);
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Err(RunError::Timeout);
        }
        thread::sleep(POLL_INTERVAL);
    }
}

fn try_wait(child: &mut Child) -> Result<Option<std::process::ExitStatus>, RunError> {
    child
        .try_wait()
        .map_err(|e| RunError::Io(format!("wait failed: {e}")))
}

fn finish(status: std::process::ExitStatus, fed_at_eof: bool) -> Result<(), RunError> {
    if status.success() {
        Ok(())
    } else if fed_at_eof {
        // Strict pacing: the candidate only died once it saw end-of-input,
        // i.e. it was still trying to read past the feed.
        Err(RunError::ExtraInputRequested)
    } else {
        Err(RunError::NonzeroExit(status.code().unwrap_or(-1)))
    }
}
