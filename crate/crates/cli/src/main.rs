//! `cyclespace`: reproducible experiments on FK-Ising, Loop O(1), geodesic
//! cycles of DL(2,2) boxes and feasible generating sets.
//!
//! Exit codes: 0 success, 1 assertion failure, 2 usage or budget error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use output::{Destination, Format};

#[derive(Parser, Debug)]
#[command(name = "cyclespace", version, about, args_override_self = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every subcommand.
#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Output file; defaults to `$CYCLESPACE_OUT_DIR/<command>.<ext>` or stdout.
    #[arg(long, global = true)]
    #[serde(skip)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    /// Omit the timestamp header line.
    #[arg(long, global = true)]
    #[serde(skip)]
    no_timestamp: bool,
    /// `key = value` file; explicit flags override its entries.
    #[arg(long, global = true)]
    #[serde(skip)]
    config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact check that the uniform even subgraph of FK-Ising is Loop O(1).
    VerifyIdentity(commands::VerifyIdentity),
    /// Monte Carlo construction of 4n-cycles through o in DL(2,2) boxes.
    DlExperiment(commands::DlExperiment),
    /// Level-by-level generating sets of percolation cycle spaces.
    Gensets(commands::Gensets),
    /// Stochastic domination of Bernoulli by FK-Ising over increasing events.
    Domination(commands::Domination),
    /// Geodesic cycles through a vertex.
    EnumerateGeodesics(commands::EnumerateGeodesics),
    /// Samples or exact laws of the edge models.
    Sample(commands::Sample),
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Assertion(String),
    /// Exit 2.
    Usage(String),
}

impl From<cyclespace::Error> for Failure {
    fn from(e: cyclespace::Error) -> Self {
        match e {
            cyclespace::Error::StructuralViolation(_) => Failure::Assertion(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn run(cmd: Command) -> Result<bool, Failure> {
    macro_rules! dispatch {
        ($args:expr, $name:literal) => {{
            let args = $args;
            let report = args.execute()?;
            let common = args.common();
            let dest = Destination::resolve(common.out.clone(), common.format, !common.no_timestamp, $name);
            output::write_report(&dest, $name, &args, &report).map_err(|e| Failure::Usage(format!("write failed: {e}")))?;
            Ok(report.passed)
        }};
    }
    match cmd {
        Command::VerifyIdentity(a) => dispatch!(a, "verify-identity"),
        Command::DlExperiment(a) => dispatch!(a, "dl-experiment"),
        Command::Gensets(a) => dispatch!(a, "gensets"),
        Command::Domination(a) => dispatch!(a, "domination"),
        Command::EnumerateGeodesics(a) => dispatch!(a, "enumerate-geodesics"),
        Command::Sample(a) => dispatch!(a, "sample"),
    }
}

fn main() -> ExitCode {
    let args = match config::merge_config(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("assertion failed; see summary lines");
            ExitCode::from(1)
        }
        Err(Failure::Assertion(m)) => {
            eprintln!("assertion failed: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
