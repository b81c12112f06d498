//! The `medial` command-line tool.
//!
//! Exit codes: 0 when the asked property holds, 1 when it does not, 2 on any
//! input or usage error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use medial_core::enumerate::EnumerationError;
use medial_core::{EquationError, LinearizeError, TableError};
use thiserror::Error;

mod commands;
pub mod report;
pub mod tablefile;

pub use report::Report;
pub use tablefile::TableFile;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}{}: {message}", if *line > 0 { format!(":{line}") } else { String::new() })]
    Parse { path: String, line: usize, message: String },
    #[error(transparent)]
    Table(#[from] TableError),
    #[error(transparent)]
    Equation(#[from] EquationError),
    #[error(transparent)]
    Linearize(#[from] LinearizeError),
    #[error(transparent)]
    Enumeration(#[from] EnumerationError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn with_path(self, path: &str) -> Self {
        match self {
            CliError::Parse { line, message, .. } => CliError::Parse {
                path: path.to_string(),
                line,
                message,
            },
            CliError::Table(e) => CliError::Parse {
                path: path.to_string(),
                line: 0,
                message: e.to_string(),
            },
            other => other,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "medial",
    version,
    about = "Quasigroup tables against balanced medial-like equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one or two tables against an equation.
    Check(CheckArgs),
    /// Satisfaction of every single-operation catalog entry, plus properties.
    Classify {
        #[arg(long)]
        table: PathBuf,
    },
    /// Linear representation over the group derived from the table(s).
    Linearize(LinearizeArgs),
    /// List a catalog.
    Catalog {
        /// The two-operation catalog instead of the single one.
        #[arg(long)]
        pairs: bool,
    },
    /// Enumerate Latin squares of a given order.
    Enumerate(EnumerateArgs),
    /// Exit 0 if the equation is Belousov, 1 if balanced but not Belousov.
    Belousov {
        #[arg(long)]
        equation: String,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// Table bound to the second operation symbol.
    #[arg(long)]
    pub table2: Option<PathBuf>,
    #[arg(long, conflicts_with = "label", required_unless_present = "label")]
    pub equation: Option<String>,
    /// Catalog label such as `1-1` or `2-16`.
    #[arg(long)]
    pub label: Option<String>,
    /// Lift the assignment-count guard.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct LinearizeArgs {
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long)]
    pub table2: Option<PathBuf>,
    /// Base point of the principal isotope.
    #[arg(long, default_value_t = 0)]
    pub base_element: usize,
    /// Verify the relation set of this pair-catalog entry.
    #[arg(long, requires = "table2")]
    pub relations: Option<String>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long)]
    pub order: usize,
    /// Keep squares satisfying this catalog entry.
    #[arg(long, conflicts_with = "equation")]
    pub label: Option<String>,
    /// Keep squares satisfying this equation, every symbol bound to the square.
    #[arg(long)]
    pub equation: Option<String>,
    #[arg(long, conflicts_with = "census")]
    pub count_only: bool,
    /// Per-entry counts as JSON.
    #[arg(long)]
    pub census: bool,
    /// Census over ordered pairs of squares against the pair catalog.
    #[arg(long, requires = "census", conflicts_with_all = ["label", "equation", "reduced"])]
    pub pairs: bool,
    /// Ignore the order cap.
    #[arg(long)]
    pub force: bool,
    /// Only squares whose first row is 0 1 … n-1.
    #[arg(long)]
    pub reduced: bool,
}

/// Runs a parsed command, writing its result to `out`; returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<i32, CliError> {
    match &cli.command {
        Command::Check(a) => commands::check(a, out),
        Command::Classify { table } => commands::classify(table, out),
        Command::Linearize(a) => commands::linearize(a, out),
        Command::Catalog { pairs } => commands::catalog(*pairs, out),
        Command::Enumerate(a) => commands::enumerate(a, out),
        Command::Belousov { equation } => commands::belousov(equation, out),
    }
}
