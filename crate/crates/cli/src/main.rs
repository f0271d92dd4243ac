//! `twocnf-ies`: batch front end for the redundancy and irredundant
//! equivalent subset analyses.

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod generate;

/// Exit statuses shared by every subcommand.
pub mod status {
    pub const ANSWERED: u8 = 0;
    pub const FALSE: u8 = 1;
    pub const EXHAUSTED: u8 = 2;
    pub const USAGE: u8 = 64;
    pub const DATA: u8 = 65;
}

#[derive(Parser, Debug)]
#[command(
    name = "twocnf-ies",
    version,
    about = "Redundancy and irredundant equivalent subsets of 2CNF and Horn formulas"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Human)]
    pub format: Format,
    /// Also print which input line each canonical clause id came from.
    #[arg(long, global = true)]
    pub map: bool,
    /// Use the Horn procedures even on 2CNF input.
    #[arg(long, global = true)]
    pub horn: bool,
    /// Allow exact search above the default clause limit.
    #[arg(long, global = true)]
    pub exact_force: bool,
    /// Clause limit for exact search.
    #[arg(long, global = true)]
    pub max_clauses: Option<usize>,
    /// Node limit for exact search.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Time limit for exact search, in seconds.
    #[arg(long, global = true)]
    pub time_cap: Option<f64>,
    /// Seed for the random generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Dimacs,
    Dot,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Regime and cyclicity.
    Classify(Input),
    /// Per-clause redundancy.
    Redundant(Input),
    /// Full irredundant equivalent subset report.
    Ies {
        #[command(flatten)]
        input: Input,
        /// Stop with status 1 unless the subset is unique.
        #[arg(long)]
        unique_only: bool,
    },
    /// Smallest size of an irredundant equivalent subset.
    IesSize {
        #[command(flatten)]
        input: Input,
        /// Fall back to exact search when no polynomial answer exists.
        #[arg(long)]
        exact: bool,
    },
    /// Whether a clause is in all or in some irredundant equivalent subsets.
    InIes {
        #[command(flatten)]
        input: Input,
        /// 1-based canonical clause id.
        #[arg(long)]
        clause: usize,
        #[arg(long, conflicts_with = "some", required_unless_present = "some")]
        all: bool,
        #[arg(long)]
        some: bool,
    },
    /// Print one irredundant equivalent subset as DIMACS.
    Prune(Input),
    /// Generate an instance of one of the hardness reductions.
    Gen(generate::GenArgs),
    /// Exhaustive reference answers.
    Oracle {
        #[command(subcommand)]
        question: Question,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Input {
    /// DIMACS file; standard input when absent or `-`.
    pub path: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Question {
    /// List every irredundant equivalent subset.
    Enumerate(Input),
    /// Smallest subset and its size.
    MinSize(Input),
    /// Whether a clause is in some subset.
    InSome {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        clause: usize,
    },
    /// Whether the given clauses form an irredundant equivalent subset.
    IsIes {
        #[command(flatten)]
        input: Input,
        /// Comma-separated 1-based clause ids.
        #[arg(long, value_delimiter = ',')]
        subset: Vec<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                status::USAGE
            } else {
                status::ANSWERED
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("twocnf-ies: {}", e.message);
            ExitCode::from(e.status)
        }
    }
}
