//! `itconn`: batch verification of iterative derivations, connections,
//! solutions and Galois examples over F_p.

mod commands;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{Config, Example};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "itconn", version, about = "Exact checks for iterative derivations and connections in characteristic p")]
struct Cli {
    /// prime p; must agree with the input file when both are given
    #[arg(long = "p", global = true)]
    p: Option<u32>,
    /// truncation order N
    #[arg(long = "N", global = true)]
    order: Option<usize>,
    /// depth L
    #[arg(long = "L", global = true)]
    depth: Option<u32>,
    /// seed for sampled checks and the suite
    #[arg(long, global = true, env = "ITCONN_SEED", default_value_t = itconn_core::suite::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// add wall-clock timings (reports are then no longer byte-identical)
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check ψ^(i)∘ψ^(j) = C(i+j,i) ψ^(i+j) for a higher derivation
    CheckIterative { file: PathBuf },
    /// Fundamental solution of an iterable equation
    Solve { file: PathBuf },
    /// Fc-projective system of an iterative structure
    ExtractProjsys { file: PathBuf },
    /// Fc-system to structure and back
    Roundtrip { file: PathBuf },
    /// Check one of the worked Galois examples
    VerifyExample {
        #[arg(value_enum)]
        example: Example,
        file: Option<PathBuf>,
    },
    /// Run the acceptance criteria
    Suite {
        #[arg(long)]
        criterion: Option<u8>,
    },
}

fn run(cli: &Cli) -> Result<Report> {
    let cfg = Config { p: cli.p, order: cli.order, depth: cli.depth, seed: cli.seed, timings: cli.timings };
    match &cli.command {
        Command::CheckIterative { file } => commands::check_iterative(file, &cfg),
        Command::Solve { file } => commands::solve(file, &cfg),
        Command::ExtractProjsys { file } => commands::extract_projsys(file, &cfg),
        Command::Roundtrip { file } => commands::roundtrip(file, &cfg),
        Command::VerifyExample { example, file } => commands::verify_example(*example, file.as_deref(), &cfg),
        Command::Suite { criterion } => commands::run_suite(*criterion, &cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let text = match cli.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("writing {}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(if report.verdict { 0 } else { 1 })
}
