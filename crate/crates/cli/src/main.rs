//! `gausspf` — evaluate matrix elements of fermionic Gaussian operators in
//! arbitrary product Pauli bases, enumerate sign-matrix pairs, run the dense
//! oracle verification, and report the Lie-algebra self-checks.
//!
//! Exit codes: 0 success, 1 usage, 2 validation, 3 decomposition,
//! 4 branch failure, 5 verification failure.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use gausspf::Error as CoreError;
use std::process::ExitCode;

pub const EXIT_USAGE: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DECOMPOSITION: u8 = 3;
pub const EXIT_BRANCH: u8 = 4;
pub const EXIT_VERIFY: u8 = 5;

#[derive(Debug, Parser)]
#[command(name = "gausspf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single matrix element <bra|G|ket>.
    Element {
        /// Gaussian spec JSON file
        #[arg(long)]
        spec: String,
        /// Basis file path or inline site list ("z", "x,y,z", "0.1:0.2:0.3")
        #[arg(long, default_value = "z")]
        basis: String,
        /// Bra spins, '+'/'-' per site, site 1 leftmost
        #[arg(long, allow_hyphen_values = true)]
        bra: String,
        /// Ket spins, '+'/'-' per site, site 1 leftmost
        #[arg(long, allow_hyphen_values = true)]
        ket: String,
        /// Oracle comparison tolerance recorded in the output
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Output file (stdout when absent)
        #[arg(long)]
        out: Option<String>,
    },
    /// Dump all 4^L elements as a CSV matrix.
    Table {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value = "z")]
        basis: String,
        /// Output format: csv (default) or json
        #[arg(long, default_value = "csv")]
        format: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Enumerate all 2^(2L-1) sign-matrix pairs.
    Signs {
        /// Number of sites (guarded at 6)
        #[arg(long)]
        sites: usize,
        /// Functionally validate every pair against the computational formula
        #[arg(long)]
        check: bool,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run seeded random specs through the formulas and the dense oracle.
    Verify {
        #[arg(long)]
        sites: usize,
        /// Number of random specs per pass
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Lie-algebra report: closure dimension, spectrum, overlaps, L=2 table.
    Algebra {
        #[arg(long)]
        sites: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Diagonal probability of a real mixed state from its correlation matrix.
    Probability {
        /// Correlation-matrix JSON file {"G": [[...]]}
        #[arg(long)]
        spec: String,
        /// Occupation config, '+' = occupied, site 1 leftmost
        #[arg(long, allow_hyphen_values = true)]
        ket: String,
        #[arg(long)]
        out: Option<String>,
    },
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::Singular | CoreError::IllConditioned { .. } => EXIT_DECOMPOSITION,
        CoreError::BranchCut { .. } => EXIT_BRANCH,
        _ => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Element {
            spec,
            basis,
            bra,
            ket,
            tol,
            out,
        } => commands::element(&spec, &basis, &bra, &ket, tol, out.as_deref()),
        Command::Table {
            spec,
            basis,
            format,
            out,
        } => commands::table(&spec, &basis, &format, out.as_deref()),
        Command::Signs {
            sites,
            check,
            seed,
            tol,
            out,
        } => commands::signs(sites, check, seed, tol, out.as_deref()),
        Command::Verify {
            sites,
            trials,
            seed,
            tol,
            out,
        } => commands::verify(sites, trials, seed, tol, out.as_deref()),
        Command::Algebra { sites, out } => commands::algebra(sites, out.as_deref()),
        Command::Probability { spec, ket, out } => {
            commands::probability(&spec, &ket, out.as_deref())
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code_for(&err))
        }
    }
}
