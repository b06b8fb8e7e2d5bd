use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use simon_anneal::Error;

use crate::args::Format;

/// A failed run, carrying its exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Compute(String),
    Io(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Compute(_) => 3,
            Failure::Io(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "invalid configuration: {m}"),
            Failure::Compute(m) | Failure::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        if e.is_config() {
            Failure::Config(msg.trim_start_matches("invalid configuration: ").to_string())
        } else if e.is_io() {
            Failure::Io(msg)
        } else {
            Failure::Compute(msg)
        }
    }
}

pub type Outcome<T> = Result<T, Failure>;

/// Global settings shared by every subcommand.
pub struct Context {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: u64,
    pub quiet: bool,
    invocation: String,
}

impl Context {
    pub fn new(out: Option<PathBuf>, format: Option<Format>, seed: u64, quiet: bool, args: &[String]) -> Self {
        Self {
            out,
            format,
            seed,
            quiet,
            invocation: invocation(args),
        }
    }

    /// The requested format, or `default` when none was given.
    pub fn format(&self, default: Format, allowed: &[Format]) -> Outcome<Format> {
        let f = self.format.unwrap_or(default);
        if allowed.contains(&f) {
            Ok(f)
        } else {
            Err(Failure::Config(format!("this command cannot write {f:?} output").to_lowercase()))
        }
    }

    pub fn header(&self) -> String {
        format!("simon-anneal {} {}", env!("CARGO_PKG_VERSION"), self.invocation)
    }

    pub fn meta(&self, extra: Value) -> Value {
        let mut meta = json!({
            "tool": "simon-anneal",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.invocation,
            "seed": self.seed,
        });
        if let (Value::Object(m), Value::Object(e)) = (&mut meta, extra) {
            m.extend(e);
        }
        meta
    }

    pub fn info(&self, msg: impl fmt::Display) {
        if !self.quiet {
            eprintln!("{msg}");
        }
    }

    /// Writes the main output to `--out` or standard output.
    pub fn emit(&self, content: &str) -> Outcome<()> {
        match &self.out {
            Some(path) => write_file(path, content),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(content.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
            }
        }
    }
}

pub fn write_file(path: &Path, content: &str) -> Outcome<()> {
    fs::write(path, content).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

pub fn read_file(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

/// The command line minus `--out`, so the record does not depend on where
/// the output went.
fn invocation(args: &[String]) -> String {
    let mut kept = Vec::with_capacity(args.len());
    let mut skip_next = false;
    for a in args {
        if skip_next {
            skip_next = false;
        } else if a == "--out" {
            skip_next = true;
        } else if !a.starts_with("--out=") {
            kept.push(a.as_str());
        }
    }
    kept.join(" ")
}
