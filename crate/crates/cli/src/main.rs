//! `densecode` command-line tool.

mod commands;
mod manifest;
mod parse;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "densecode", version, about = "Encoding-unitary families for deterministic dense coding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a family file (or the unitarity of an augmented-matrix file).
    Verify(VerifyArgs),
    /// Print the limits on the largest Schmidt coefficient for (d, K).
    Bounds(BoundsArgs),
    /// Write a closed-form family.
    #[command(subcommand)]
    Construct(ConstructCommand),
    /// Search numerically for a family of K members.
    Search(SearchArgs),
    /// Estimate the largest family size over a grid of spectra.
    Scan(ScanArgs),
    /// Build the augmented message matrix of a family.
    Augment(AugmentArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Print every pairwise overlap.
    #[arg(long)]
    verbose: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct BoundsArgs {
    #[arg(long)]
    d: usize,
    #[arg(long)]
    k: usize,
    /// Number of distinct shift powers X^k among the family members.
    #[arg(long)]
    pinned_shift_powers: Option<usize>,
    /// Include the d = 3 refinement that assumes the smallest coefficient vanishes.
    #[arg(long)]
    lambda2_zero: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Subcommand)]
enum ConstructCommand {
    /// The d² Weyl operators X^k Z^l at the maximally entangled spectrum.
    Pauli {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Append the missing member to a family of d² − 1 unitaries.
    Complete {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    d: usize,
    /// Comma-separated decimals or fractions, e.g. `0.6,0.2,0.2` or `2/3,1/3,0`.
    #[arg(long, allow_hyphen_values = true)]
    lambdas: String,
    #[arg(long)]
    k: usize,
    /// Pinned members, e.g. `I,X,X2` (grammar `I` or `X<k>Z<l>`).
    #[arg(long)]
    pin: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    max_iters: usize,
    /// Success threshold on the largest pairwise overlap.
    #[arg(long, default_value_t = 1e-6)]
    residual: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 3)]
    d: usize,
    #[arg(long)]
    step: f64,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 8)]
    restarts: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    residual: f64,
}

#[derive(Debug, Args)]
struct AugmentArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct ReplayArgs {
    #[arg(long)]
    manifest: PathBuf,
}

/// Result of a command that ran to completion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// Verification failed, search found nothing, or a defect exceeded tolerance.
    Negative,
}

fn run(argv: Vec<String>) -> Result<Status> {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            anyhow::bail!("invalid arguments");
        }
        Err(e) => {
            let _ = e.print();
            return Ok(Status::Ok);
        }
    };
    match cli.command {
        Command::Verify(a) => commands::verify(&a.input, a.tol, a.verbose, a.json),
        Command::Bounds(a) => commands::bounds(a.d, a.k, a.pinned_shift_powers, a.lambda2_zero, a.json),
        Command::Construct(ConstructCommand::Pauli { d, out }) => commands::construct_pauli(&argv, d, &out),
        Command::Construct(ConstructCommand::Complete { input, out, seed, tol }) => {
            commands::construct_complete(&argv, &input, &out, seed, tol)
        }
        Command::Search(a) => commands::search(&argv, &a),
        Command::Scan(a) => commands::scan(&argv, &a),
        Command::Augment(a) => commands::augment(&argv, &a.input, &a.out, a.seed, a.tol, a.json),
        Command::Replay(a) => {
            let m = manifest::RunManifest::load(&a.manifest)?;
            if m.subcommand == "replay" {
                anyhow::bail!("manifest records a replay");
            }
            run(m.argv)
        }
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
