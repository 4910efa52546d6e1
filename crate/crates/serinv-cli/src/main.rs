//! `serinv`: invert analytic maps as truncated power series.
//!
//! Two subcommands:
//!   invert  read a problem document, compute U with one or all routes,
//!           emit a JSON report
//!   bench   time every applicable route at several orders, emit CSV
//!
//! Exit codes: 0 success, 2 malformed input, 3 invalid problem, 4 numeric
//! failure during computation.

mod benchcmd;
mod invert;
mod problem;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serinv_core::InversionError;

#[derive(Debug)]
pub enum CliError {
    /// Unreadable file or malformed / incomplete document.
    Schema(String),
    /// Well-formed document describing a problem we must refuse.
    Validation(String),
    /// Failure inside the computation itself.
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Schema(m) => write!(f, "input error: {m}"),
            CliError::Validation(m) => write!(f, "invalid problem: {m}"),
            CliError::Numeric(m) => write!(f, "computation failed: {m}"),
        }
    }
}

impl From<InversionError> for CliError {
    fn from(e: InversionError) -> Self {
        match e {
            InversionError::OrderExhausted { .. } => CliError::Numeric(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "serinv", version, about = "Truncated power-series inversion of analytic maps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Invert the map described by a JSON problem document.
    Invert {
        /// Problem document path.
        input: PathBuf,
        /// Truncation order (overrides the document).
        #[arg(long)]
        order: Option<usize>,
        /// Route: operator, pwq, matrix-op, lagrange, or all.
        #[arg(long)]
        method: Option<String>,
        /// Coefficient arithmetic: rational or float.
        #[arg(long)]
        mode: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Refuse the Kronecker route when its matrices would exceed this
        /// many cells per side, (order+1)^nvars.
        #[arg(long, default_value_t = 1 << 20)]
        max_kron_cells: usize,
    },
    /// Time every applicable route at each order; routes must agree.
    Bench {
        /// Problem document path.
        input: PathBuf,
        /// Comma-separated truncation orders, e.g. 8,16,32.
        #[arg(long)]
        orders: String,
        /// Write CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("serinv: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Invert {
            input,
            order,
            method,
            mode,
            out,
            max_kron_cells,
        } => {
            let doc = load(&input)?;
            let report = invert::run(&doc, order, method.as_deref(), mode.as_deref(), max_kron_cells)?;
            let text = serde_json::to_string_pretty(&report)
                .map_err(|e| CliError::Numeric(e.to_string()))?;
            emit(out.as_deref(), &text)
        }
        Command::Bench { input, orders, csv } => {
            let doc = load(&input)?;
            let orders = parse_orders(&orders)?;
            let text = benchcmd::run(&doc, &orders)?;
            emit(csv.as_deref(), &text)
        }
    }
}

fn load(path: &std::path::Path) -> Result<problem::ProblemDoc, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Schema(format!("cannot read {}: {e}", path.display())))?;
    problem::ProblemDoc::from_json(&text)
}

fn emit(path: Option<&std::path::Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Schema(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_orders(s: &str) -> Result<Vec<usize>, CliError> {
    let orders: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|e| CliError::Schema(format!("bad order {t:?}: {e}")))
        })
        .collect::<Result<_, _>>()?;
    if orders.is_empty() || orders.contains(&0) {
        return Err(CliError::Schema("orders must be positive integers".into()));
    }
    Ok(orders)
}
