use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use parabolica::document;
use parabolica::report::{run, Command, RunOptions};

#[derive(Clone, Copy, ValueEnum)]
enum Cmd {
    /// Rank, degrees, slope, flags and pairing checks
    Info,
    /// E ⊗ E
    Tensor,
    /// The parabolic dual E*
    Dual,
    /// Harder–Narasimhan filtration
    Hn,
    /// Stability of the paired bundle
    Classify,
    /// Existence of an algebraic connection compatible with the pairing
    Connect,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Info => Command::Info,
            Cmd::Tensor => Command::Tensor,
            Cmd::Dual => Command::Dual,
            Cmd::Hn => Command::Hn,
            Cmd::Classify => Command::Classify,
            Cmd::Connect => Command::Connect,
        }
    }
}

/// Orthogonal and symplectic parabolic bundles on the projective line.
#[derive(Parser)]
#[command(name = "parabolica", version)]
struct Cli {
    command: Cmd,
    file: PathBuf,
    /// Machine-readable output
    #[arg(long)]
    emit: bool,
    /// Number of residue -1 poles in each connection ledger
    #[arg(long = "aux-m", value_name = "INTEGER")]
    aux_m: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let text = match std::fs::read_to_string(&cli.file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{}: {e}", cli.file.display());
            return ExitCode::from(1);
        }
    };
    let doc = match document::parse(&text) {
        Ok(doc) => doc,
        Err(errors) => {
            for e in errors {
                eprintln!("{}: {e}", cli.file.display());
            }
            return ExitCode::from(1);
        }
    };
    let opts = RunOptions {
        emit: cli.emit,
        aux_m: cli.aux_m,
    };
    match run(cli.command.into(), &doc, opts) {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
