//! `torograd`: fixed-point tables, graded rings and cross-checks for smooth
//! toric varieties given by lattice polytopes.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the
//! document is still written), 2 for unreadable or unusable input.

mod commands;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{run, Command, Format, RunConfig};

#[derive(Parser)]
#[command(name = "torograd", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate the polytope and check smoothness and genericity of gamma.
    Check(Common),
    /// Fixed-point table of the f_ρ, the image Θ(Z) and Morse indices.
    Table(Common),
    /// Betti numbers computed four ways.
    Betti(Common),
    /// Monomial basis and structure constants of the graded ring.
    Gr(Common),
    /// Piecewise-polynomial presentation checks.
    Brion(Common),
    /// Everything above in one document.
    Report(Common),
}

#[derive(Args)]
struct Common {
    /// JSON polytope file, or builtin:<name>[:params] (e.g. builtin:hirzebruch:2).
    #[arg(long)]
    polytope: String,
    /// Comma-separated integers, or seed:<n> to pick a generic vector.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Output path; `-` for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, common) = match cli.command {
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Table(c) => (Command::Table, c),
        Cmd::Betti(c) => (Command::Betti, c),
        Cmd::Gr(c) => (Command::Gr, c),
        Cmd::Brion(c) => (Command::Brion, c),
        Cmd::Report(c) => (Command::Report, c),
    };
    let cfg = RunConfig {
        command,
        polytope: common.polytope,
        gamma: common.gamma,
        format: common.format,
    };
    let output = match run(&cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("torograd: {}", e.0);
            return ExitCode::from(2);
        }
    };
    let written = if common.out == "-" {
        std::io::stdout().write_all(output.document.as_bytes())
    } else {
        std::fs::write(&common.out, &output.document)
    };
    if let Err(e) = written {
        eprintln!("torograd: cannot write {}: {e}", common.out);
        return ExitCode::from(2);
    }
    if output.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
