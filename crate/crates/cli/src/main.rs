//! `mimc`: parse, explore, check and import MIM terms from the command line.

use std::io::{ErrorKind, IsTerminal, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use mimc::congruence::canonical_capability;
use mimc::consistency::proposition::proposition1_harness;
use mimc::diagram::{import, DiagramSpec};
use mimc::lts::{to_dot, to_json, to_text};
use mimc::{
    check_semantic, check_strong, check_weak, explore, parse_process, print_process, Bounds,
    ConsistencyVerdict, ParseError, Process,
};

#[derive(Parser, Debug)]
#[command(name = "mimc", version, about = "Executable MIM calculus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the canonical form of a term.
    Parse {
        /// Term file, or `-` for standard input.
        input: PathBuf,
    },
    /// Explore the labelled transition system of a term.
    Explore {
        input: PathBuf,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, default_value_t = 10_000, value_parser = positive)]
        max_states: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check the consistency of a term.
    Check {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Semantic)]
        mode: Mode,
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, default_value_t = 10_000, value_parser = positive)]
        max_states: usize,
    },
    /// Compile a `.mimd.json` diagram into a term.
    Import {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ImportFormat::Text)]
        format: ImportFormat,
    },
    /// Check random compiled diagrams for semantic consistency.
    Prop1 {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 200, value_parser = positive)]
        trials: usize,
        #[arg(long, default_value_t = 4)]
        depth: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ImportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Semantic,
    Weak,
    Strong,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Parse {
        path: PathBuf,
        text: String,
        error: ParseError,
    },
    Other(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Other(e)
    }
}

fn read(path: &PathBuf) -> anyhow::Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .context("reading standard input")?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn load(path: &PathBuf) -> Result<Process, Failure> {
    let text = read(path)?;
    parse_process(&text).map_err(|error| Failure::Parse {
        path: path.clone(),
        text,
        error,
    })
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values serialize")
}

fn emit(s: &str) {
    let mut out = std::io::stdout().lock();
    if let Err(e) = out.write_all(s.as_bytes()).and_then(|()| out.flush()) {
        if e.kind() != ErrorKind::BrokenPipe {
            eprintln!("error: writing standard output: {e}");
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Parse { input } => {
            emit(&format!("{}\n", print_process(&load(&input)?)));
        }
        Command::Explore {
            input,
            depth,
            max_states,
            format,
        } => {
            let lts = explore(&load(&input)?, Bounds::new(depth, max_states));
            if lts.truncated {
                warn(&format!(
                    "exploration truncated at {} states (depth {depth}, max states {max_states})",
                    lts.states.len()
                ));
            }
            match format {
                Format::Json => emit(&format!("{}\n", pretty(&to_json(&lts)))),
                Format::Dot => emit(&to_dot(&lts)),
                Format::Text => emit(&to_text(&lts)),
            }
        }
        Command::Check {
            input,
            mode,
            depth,
            max_states,
        } => {
            let p = load(&input)?;
            let verdict = match mode {
                Mode::Semantic => check_semantic(&p, Bounds::new(depth, max_states)),
                Mode::Weak => check_weak(&p),
                Mode::Strong => check_strong(&p),
            };
            emit(&format!("{}\n", pretty(&verdict.to_json())));
            if let ConsistencyVerdict::Inconsistent(_) = verdict {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Import { input, format } => {
            let text = read(&input)?;
            let d = DiagramSpec::from_json(&text).map_err(anyhow::Error::from)?;
            let (table, p) = import(&d).map_err(anyhow::Error::from)?;
            match format {
                ImportFormat::Text => emit(&format!("{}\n", print_process(&p))),
                ImportFormat::Json => {
                    let table: serde_json::Map<String, Value> = table
                        .iter()
                        .map(|(n, c)| {
                            (
                                n.to_string(),
                                Value::String(canonical_capability(c).to_string()),
                            )
                        })
                        .collect();
                    emit(&format!(
                        "{}\n",
                        pretty(&json!({"table": table, "process": print_process(&p)}))
                    ));
                }
            }
        }
        Command::Prop1 {
            seed,
            trials,
            depth,
        } => {
            let report = proposition1_harness(seed, trials, depth).map_err(anyhow::Error::from)?;
            emit(&format!("{}\n", pretty(&report.to_json())));
            if !report.passed() {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn color() -> bool {
    std::env::var("MIMC_COLOR").map_or(true, |v| v != "0") && std::io::stderr().is_terminal()
}

fn tag(word: &str, code: &str) -> String {
    if color() {
        format!("\x1b[1;{code}m{word}\x1b[0m")
    } else {
        word.to_string()
    }
}

fn warn(msg: &str) {
    eprintln!("{}: {msg}", tag("warning", "33"));
}

fn report(f: Failure) {
    match f {
        Failure::Parse { path, text, error } => {
            let (line, col) = error.line_col(&text);
            eprintln!("{}: {}", tag("error", "31"), error.message);
            eprintln!("  --> {}:{line}:{col}", path.display());
            if let Some(src) = text.lines().nth(line - 1) {
                eprintln!("   | {src}");
                let width = text[error.span.start.min(text.len())..error.span.end.min(text.len())]
                    .chars()
                    .count()
                    .clamp(1, (src.chars().count() + 2).saturating_sub(col).max(1));
                eprintln!("   | {}{}", " ".repeat(col - 1), "^".repeat(width));
            }
            if !error.expected.is_empty() {
                eprintln!("   = expected one of: {}", error.expected.join(", "));
            }
        }
        Failure::Other(e) => eprintln!("{}: {e:#}", tag("error", "31")),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(f) => {
            report(f);
            ExitCode::from(1)
        }
    }
}
