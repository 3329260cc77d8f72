use std::path::PathBuf;
use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};
use ecrank_cli::config::{Command, RunConfig};
use ecrank_cli::report::{Report, Tool, SCHEMA};
use ecrank_cli::run::{run, Status};
use ecrank_cli::verify::verify_file;

#[derive(Parser)]
#[command(name = "ecrank", version, about = "Independent points on elliptic curves over quadratic fields, and the group theory around them")]
struct Cli {
    #[command(subcommand)]
    command: Option<Cmd>,
    /// TOML file with the same keys as the flags; flags win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Scan for x with w(x) of new square class and certify the lifted points
    Points(RunConfig),
    /// Block structure checks over transitive groups with a transposition
    Group(RunConfig),
    /// Build the quadratic pencil for degree n and search for a common zero
    Pencil(RunConfig),
    /// Monodromy of a function on the curve
    Monodromy(RunConfig),
    /// Image of a multiset of points in the symmetric power
    Symmetrize(RunConfig),
    /// Re-check every layer of a report
    Verify { report: PathBuf },
}

const OK: u8 = 0;
const ERROR: u8 = 1;
const NOT_FOUND: u8 = 2;

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}\n");
    eprintln!("{}", Cli::command().render_usage());
    ExitCode::from(ERROR)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(OK);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(ERROR);
        }
    };
    let (command, flags) = match cli.command {
        Some(Cmd::Verify { report }) => {
            return match verify_file(&report) {
                Ok(()) => {
                    println!("pass");
                    ExitCode::from(OK)
                }
                Err(f) => {
                    println!("{f}");
                    ExitCode::from(ERROR)
                }
            };
        }
        Some(Cmd::Points(c)) => (Some(Command::Points), c),
        Some(Cmd::Group(c)) => (Some(Command::Group), c),
        Some(Cmd::Pencil(c)) => (Some(Command::Pencil), c),
        Some(Cmd::Monodromy(c)) => (Some(Command::Monodromy), c),
        Some(Cmd::Symmetrize(c)) => (Some(Command::Symmetrize), c),
        None => (None, RunConfig::default()),
    };
    let file = match &cli.config {
        Some(p) => match RunConfig::from_toml_file(p) {
            Ok(c) => c,
            Err(e) => return usage_error(&e.to_string()),
        },
        None => RunConfig::default(),
    };
    let merged = file.overlay(RunConfig { command, ..flags });
    let resolved = match merged.resolve() {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let outcome = match run(&resolved) {
        Ok(o) => o,
        Err(e @ ecrank_core::Error::ScanExhausted(_)) => {
            eprintln!("not found: {e}");
            return ExitCode::from(NOT_FOUND);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(ERROR);
        }
    };
    eprint!("{}", outcome.summary);
    let report = Report {
        schema: SCHEMA.into(),
        command: resolved.command(),
        config: resolved.echo(),
        result: outcome.result,
        tool: Tool::current(),
    };
    if let Err(e) = report.write(merged.out.as_deref()) {
        eprintln!("error: cannot write the report: {e}");
        return ExitCode::from(ERROR);
    }
    match outcome.status {
        Status::Success => ExitCode::from(OK),
        Status::NotFound => ExitCode::from(NOT_FOUND),
    }
}
