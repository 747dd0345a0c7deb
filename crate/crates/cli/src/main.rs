mod commands;
mod config;
mod state;

use std::collections::HashMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use config::Config;

/// Exact reals from almost homomorphisms, rational hyperreals, and an
/// ultrafilter simulator.
#[derive(Parser, Debug)]
#[command(name = "eudoxus", version)]
struct Cli {
    /// Work budget for sign decisions and powers
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    budget: Option<u64>,
    /// Emit one JSON object instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Configuration file (`key = value` lines)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Ultrafilter trace file
    #[arg(long, global = true, value_name = "FILE")]
    state: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decimal expansion of a real expression
    Digits {
        expr: String,
        /// Digits after the decimal point
        #[arg(short = 'p', long, value_parser = clap::value_parser!(u32).range(0..=100_000))]
        precision: Option<u32>,
    },
    /// Hyperreal expressions in dx and omega
    Hyper {
        #[command(subcommand)]
        command: HyperCommand,
    },
    /// Derivative of a rational function of x at a rational point
    Derive {
        expr: String,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Lazily decided ultrafilter on eventually periodic sets
    Ultra {
        #[command(subcommand)]
        command: UltraCommand,
    },
    /// Limit ultrapower admissibility
    Lup {
        #[command(subcommand)]
        command: LupCommand,
    },
    /// Run the built-in invariant suites
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum HyperCommand {
    /// Class, standard part and leading term
    Eval { expr: String },
}

#[derive(Subcommand, Debug)]
enum UltraCommand {
    /// Decide a set and record the decision
    Query { set: String },
    /// Whether the recorded decisions force a set in or out (read-only)
    Contains { set: String },
    /// Print the decision log
    Trace,
}

#[derive(Subcommand, Debug)]
enum LupCommand {
    Check {
        expr: String,
        /// Semicolon-separated set specs covering N
        #[arg(long)]
        partition: String,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    pub budget_used: u64,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            budget_used: 0,
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            budget_used: 0,
        }
    }

    pub fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: 3,
            message: message.into(),
            budget_used: 0,
        }
    }

    pub fn with_used(mut self, used: u64) -> Self {
        self.budget_used = used;
        self
    }
}

/// A successful command: its text rendering and structured result.
pub struct Outcome {
    pub text: String,
    pub result: serde_json::Value,
    pub diagnostics: Vec<Diagnostic>,
    pub budget_used: u64,
    /// Nonzero exit with a normal report (failing self-test).
    pub code: u8,
}

#[derive(Serialize, Debug, Clone)]
pub struct Diagnostic {
    pub level: &'static str,
    pub message: String,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    result: serde_json::Value,
    diagnostics: Vec<Diagnostic>,
    budget_used: u64,
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Digits { .. } => "digits",
        Command::Hyper { .. } => "hyper eval",
        Command::Derive { .. } => "derive",
        Command::Ultra { command } => match command {
            UltraCommand::Query { .. } => "ultra query",
            UltraCommand::Contains { .. } => "ultra contains",
            UltraCommand::Trace => "ultra trace",
        },
        Command::Lup { .. } => "lup check",
        Command::Selftest { .. } => "selftest",
    }
}

fn resolve_config(cli: &Cli) -> Result<Config, Failure> {
    let env: HashMap<String, String> = std::env::vars().collect();
    let mut cfg = Config::default();
    let file = cli
        .config
        .clone()
        .or_else(|| env.get("EUDOXUS_CONFIG").map(PathBuf::from));
    if let Some(path) = file {
        cfg.apply_file(&path).map_err(Failure::usage)?;
    }
    cfg.apply_env(&env).map_err(Failure::usage)?;
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(s) = &cli.state {
        cfg.state_path = s.clone();
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let cfg = resolve_config(cli)?;
    match &cli.command {
        Command::Digits { expr, precision } => {
            commands::digits(expr, precision.unwrap_or(cfg.default_precision), &cfg)
        }
        Command::Hyper {
            command: HyperCommand::Eval { expr },
        } => commands::hyper_eval(expr, &cfg),
        Command::Derive { expr, at } => commands::derive(expr, at, &cfg),
        Command::Ultra { command } => match command {
            UltraCommand::Query { set } => commands::ultra_query(set, &cfg),
            UltraCommand::Contains { set } => commands::ultra_contains(set, &cfg),
            UltraCommand::Trace => commands::ultra_trace(&cfg),
        },
        Command::Lup {
            command: LupCommand::Check { expr, partition },
        } => commands::lup_check(expr, partition, &cfg),
        Command::Selftest { seed } => Ok(commands::selftest(*seed)),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let name = command_name(&cli.command);
    let outcome = run(&cli);
    let mut out = std::io::stdout().lock();
    let code = match outcome {
        Ok(o) => {
            if cli.json {
                let env = Envelope {
                    command: name,
                    result: o.result,
                    diagnostics: o.diagnostics,
                    budget_used: o.budget_used,
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&env).expect("serializable"));
            } else {
                let _ = write!(out, "{}", o.text);
                for d in &o.diagnostics {
                    eprintln!("{}: {}", d.level, d.message);
                }
            }
            o.code
        }
        Err(f) => {
            if cli.json {
                let env = Envelope {
                    command: name,
                    result: serde_json::Value::Null,
                    diagnostics: vec![Diagnostic {
                        level: "error",
                        message: f.message.clone(),
                    }],
                    budget_used: f.budget_used,
                };
                let _ = writeln!(out, "{}", serde_json::to_string(&env).expect("serializable"));
            } else {
                eprintln!("error: {}", f.message);
            }
            f.code
        }
    };
    ExitCode::from(code)
}
