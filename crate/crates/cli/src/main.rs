use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use carleson_cli::{run, CliError, Command, Options};

/// Carleson embedding toolkit for discrete model spaces.
#[derive(Parser)]
#[command(name = "carleson", version, disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Args)]
struct Common {
    /// Instance description file.
    file: PathBuf,
    /// Number of nodes to keep (overrides the instance).
    #[arg(long)]
    truncate: Option<usize>,
    /// Numerical tolerance (overrides the instance).
    #[arg(long)]
    tol: Option<f64>,
    /// Tail window length (overrides the instance).
    #[arg(long)]
    window: Option<usize>,
    /// Atoms per continuous component when a matrix stand-in is built.
    #[arg(long)]
    discretize: Option<usize>,
    /// Assert that the tail quantities keep decreasing beyond the truncation.
    #[arg(long)]
    tail_monotone: bool,
    /// Fail (exit 3) when a numerical routine misses its tolerance.
    #[arg(long)]
    strict: bool,
    /// How many leading eigenvalues the oracle reports.
    #[arg(long)]
    top: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Sub {
    /// Parse, resolve and describe an instance without judging it.
    Validate(Common),
    /// Decide boundedness of the embedding from the per-annulus quantities.
    Check(Common),
    /// Decide compactness on top of boundedness.
    Compact(Common),
    /// Compare the closed-form Hilbert-Schmidt norm with its split form.
    Hs(Common),
    /// Build the embedding matrix and estimate operator and tail norms.
    Oracle(Common),
    /// Everything above in one document.
    Report(Common),
    /// Re-run the pipeline over a parameter grid, one CSV row per point.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Grid spec: tol, truncate, window, discretize or c<idx>.<field>,
        /// written as name=start:step:end (inclusive).
        #[arg(long)]
        param: String,
    },
}

fn split(sub: Sub) -> (Command, Common) {
    match sub {
        Sub::Validate(c) => (Command::Validate, c),
        Sub::Check(c) => (Command::Check, c),
        Sub::Compact(c) => (Command::Compact, c),
        Sub::Hs(c) => (Command::Hs, c),
        Sub::Oracle(c) => (Command::Oracle, c),
        Sub::Report(c) => (Command::Report, c),
        Sub::Sweep { common, param } => (Command::Sweep { param }, common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = split(cli.command);
    let source = match std::fs::read_to_string(&common.file) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", common.file.display());
            return ExitCode::from(1);
        }
    };
    let opts = Options {
        truncate: common.truncate,
        tol: common.tol,
        window: common.window,
        discretize: common.discretize,
        tail_monotone: common.tail_monotone,
        strict: common.strict,
        top: common.top,
    };
    match run(&command, &source, &opts) {
        Ok(text) => {
            if let Some(path) = &common.out {
                if let Err(e) = std::fs::write(path, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                let mut stdout = std::io::stdout().lock();
                // A closed pipe downstream (e.g. `| head`) is not our error.
                if let Err(e) = writeln!(stdout, "{text}") {
                    if e.kind() != std::io::ErrorKind::BrokenPipe {
                        eprintln!("error: cannot write stdout: {e}");
                        return ExitCode::from(1);
                    }
                }
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(match err {
                CliError::Parse(_) => 1,
                CliError::Instance(_) => 2,
                CliError::Numeric(_) => 3,
            })
        }
    }
}
