use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use sitc_core::typecheck::QuantifierMode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantifierModeArg {
    Standard,
    PaperFaithful,
}

impl From<QuantifierModeArg> for QuantifierMode {
    fn from(m: QuantifierModeArg) -> Self {
        match m {
            QuantifierModeArg::Standard => QuantifierMode::Standard,
            QuantifierModeArg::PaperFaithful => QuantifierMode::PaperFaithful,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Check,
    Eval,
    Sat,
    Fix,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Eval => "eval",
            Command::Sat => "sat",
            Command::Fix => "fix",
        }
    }
}

#[derive(Debug, Clone, Subcommand)]
enum Sub {
    /// Type-check statements and report verdicts.
    Check { inputs: Vec<PathBuf> },
    /// Evaluate statements step by step.
    Eval { inputs: Vec<PathBuf> },
    /// Check statements against a finite world (requires --world).
    Sat { inputs: Vec<PathBuf> },
    /// Suggest, and with --apply-fixes apply, rewrites for type errors.
    Fix { inputs: Vec<PathBuf> },
}

/// Type checker and evaluator for situation calculus statements.
#[derive(Debug, Clone, Parser)]
#[command(name = "sitc", version)]
pub struct Cli {
    #[command(subcommand)]
    sub: Sub,
    #[arg(long, value_enum, default_value = "human", global = true)]
    format: Format,
    /// Print derivation trees.
    #[arg(long, global = true)]
    explain: bool,
    /// Attach suggested rewrites to type errors.
    #[arg(long, global = true)]
    suggest_fixes: bool,
    /// Write the corrected program to `<stem>.fixed.sitc` next to the input.
    #[arg(long, global = true)]
    apply_fixes: bool,
    /// Finite world file used by `sat`.
    #[arg(long, global = true, value_name = "PATH")]
    world: Option<PathBuf>,
    /// Step limit for `eval`.
    #[arg(long, default_value_t = 1000, global = true,
          value_parser = clap::value_parser!(u64).range(1..))]
    fuel: u64,
    /// How multi-type quantifiers expand for `eval` and `sat`.
    #[arg(long, value_enum, default_value = "standard", global = true)]
    quantifier_mode: QuantifierModeArg,
    /// Stop reporting diagnostics for a file after this many.
    #[arg(long, global = true, value_name = "N")]
    max_errors: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub inputs: Vec<PathBuf>,
    pub format: Format,
    pub explain: bool,
    pub suggest_fixes: bool,
    pub apply_fixes: bool,
    pub world: Option<PathBuf>,
    pub fuel: usize,
    pub quantifier_mode: QuantifierMode,
    pub max_errors: Option<usize>,
}

impl RunConfig {
    pub fn new(command: Command, inputs: Vec<PathBuf>) -> Self {
        RunConfig {
            command,
            inputs,
            format: Format::Human,
            explain: false,
            suggest_fixes: false,
            apply_fixes: false,
            world: None,
            fuel: 1000,
            quantifier_mode: QuantifierMode::Standard,
            max_errors: None,
        }
    }
}

impl From<Cli> for RunConfig {
    fn from(cli: Cli) -> Self {
        let (command, inputs) = match cli.sub {
            Sub::Check { inputs } => (Command::Check, inputs),
            Sub::Eval { inputs } => (Command::Eval, inputs),
            Sub::Sat { inputs } => (Command::Sat, inputs),
            Sub::Fix { inputs } => (Command::Fix, inputs),
        };
        RunConfig {
            command,
            inputs,
            format: cli.format,
            explain: cli.explain,
            suggest_fixes: cli.suggest_fixes,
            apply_fixes: cli.apply_fixes,
            world: cli.world,
            fuel: usize::try_from(cli.fuel).unwrap_or(usize::MAX),
            quantifier_mode: cli.quantifier_mode.into(),
            max_errors: cli.max_errors,
        }
    }
}
