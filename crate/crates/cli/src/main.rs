//! Command-line driver.
//!
//! Exit codes: 0 success, 2 parse/validation error, 3 rule precondition
//! error (e.g. total conflict), 4 verification failure. The structured
//! report goes to stdout; diagnostics go to stderr.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use dsmfuse_cli::corpus;
use dsmfuse_cli::document::{load_document, resolve_rule, DocError, RuleSpec};
use dsmfuse_cli::runner::{inspect, run_fusion};

#[derive(Parser)]
#[command(
    name = "dsmfuse",
    version,
    about = "Exact belief fusion for numeric and label masses"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Combine the document's sources under a rule and print the report.
    Fuse {
        /// Input fusion document (JSON).
        #[arg(long)]
        input: PathBuf,
        /// Combination rule: disjunctive, conjunctive, dempster, tbm, yager,
        /// dubois_prade, florea, mix, pcr5, pcr6, dpcr, dpcr_lambda, mdpcr.
        #[arg(long)]
        rule: Option<String>,
        /// Dissimilarity for mix/mdpcr: delta, eta or jaccard.
        #[arg(long)]
        dissimilarity: Option<String>,
        /// Alpha policy for dpcr/mdpcr: fixed:<rational>, global or lambda.
        #[arg(long)]
        alpha: Option<String>,
        /// Also print the pignistic probability of each atom.
        #[arg(long)]
        betp: bool,
        /// For label masses, also print each label rounded back onto the
        /// original scale.
        #[arg(long)]
        approximate: bool,
    },
    /// Replay the built-in corpus of worked examples.
    Verify {
        /// Only run cases whose name contains this string, e.g. "example=6".
        #[arg(long)]
        filter: Option<String>,
    },
    /// Print the minterm table and cardinalities of a document.
    Inspect {
        /// Input fusion document (JSON).
        #[arg(long)]
        input: PathBuf,
    },
}

fn exit_code_for(err: &DocError) -> u8 {
    match err {
        // Rule preconditions (total conflict, wrong arity, missing or
        // invalid rule options) are distinct from document problems.
        DocError::Fusion(_) => 3,
        _ => 2,
    }
}

fn read_input(path: &PathBuf) -> Result<String, u8> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        2
    })
}

fn run() -> Result<(), u8> {
    match Cli::parse().command {
        Command::Fuse {
            input,
            rule,
            dissimilarity,
            alpha,
            betp,
            approximate,
        } => {
            let text = read_input(&input)?;
            let loaded = load_document(&text).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            let overrides = RuleSpec {
                name: rule,
                dissimilarity,
                alpha,
                approximate: approximate.then_some(true),
                betp: betp.then_some(true),
            };
            let (config, betp) =
                resolve_rule(loaded.document.rule.as_ref(), &overrides).map_err(|e| {
                    eprintln!("error: {e}");
                    exit_code_for(&e)
                })?;
            let output = run_fusion(&loaded, &config, betp).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            print!("{}", output.emit());
            Ok(())
        }
        Command::Verify { filter } => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            let (_, failed) = corpus::verify(filter.as_deref(), &mut lock);
            lock.flush().ok();
            if failed > 0 {
                Err(4)
            } else {
                Ok(())
            }
        }
        Command::Inspect { input } => {
            let text = read_input(&input)?;
            let loaded = load_document(&text).map_err(|e| {
                eprintln!("error: {e}");
                exit_code_for(&e)
            })?;
            print!("{}", inspect(&loaded));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}
