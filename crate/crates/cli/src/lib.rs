//! Batch command-line front end for exact J-unitary matrix polynomial algebra.

pub mod commands;
pub mod document;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use jumat_core::Mode;

pub use commands::{run, Outcome};
pub use document::{Document, FactorDoc, MatrixDoc, ReportDoc, ScalarDoc, Var, WordDoc};

/// Exit status for success or membership.
pub const EXIT_OK: u8 = 0;
/// Exit status for a well-formed input that fails the requested check.
pub const EXIT_NEGATIVE: u8 = 1;
/// Exit status for usage, parse and dimension errors.
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "jumat", version, about)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Coefficient restriction: complex, real-omega or real-lambda.
    #[arg(long, global = true)]
    pub mode: Option<Mode>,
    /// Variable of output documents: omega or lambda.
    #[arg(long, global = true)]
    pub var: Option<document::Var>,
    #[arg(long, global = true, env = "JUMAT_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Include every reduction step in factor output.
    #[arg(long, global = true)]
    pub trace: bool,
    /// Worker threads for batches of input documents.
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,
    /// Phase and tangent degree bound for `rand`; input degree bound for `factor`.
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Test membership of matrix documents.
    Check {
        /// Input documents; `-` or none reads standard input.
        files: Vec<PathBuf>,
        /// Also require U(0) = I.
        #[arg(long)]
        normalized: bool,
    },
    /// Factor matrix documents into reduced words with a constant tail.
    Factor {
        files: Vec<PathBuf>,
        /// Re-multiply and compare before printing (default).
        #[arg(long, overrides_with = "no_verify")]
        verify: bool,
        #[arg(long)]
        no_verify: bool,
    },
    /// Multiply matrix or word documents left to right.
    Mul {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Invert a word, or a matrix in the group.
    Inv { file: Option<PathBuf> },
    /// Build a single factor from explicit parameters.
    Gen {
        /// Direction, comma separated, e.g. `1,3/5+4/5i,0`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        /// Phase coefficients, comma separated, lowest power first.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        phi: String,
        /// Tangent coefficients: vectors separated by `;`, lowest power first.
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        g: String,
        /// Emit a one-factor word instead of the matrix.
        #[arg(long)]
        word: bool,
    },
    /// Emit seeded random words (or their matrices).
    Rand {
        #[arg(long, default_value_t = 3)]
        nu: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 6)]
        max_factors: usize,
        /// Bound on numerators and denominators.
        #[arg(long, default_value_t = 1000)]
        height: u64,
        /// Emit the expanded matrix.
        #[arg(long)]
        matrix: bool,
    },
    /// Conjugate a word or matrix by a constant block unitary `diag{1, L}`.
    Conj {
        file: Option<PathBuf>,
        /// Matrix document holding the constant unitary.
        #[arg(long, conflicts_with = "random")]
        by: Option<PathBuf>,
        /// Use a seeded random unitary.
        #[arg(long)]
        random: bool,
    },
    /// Run a quick seeded battery of algebraic checks.
    Selftest {
        #[arg(long, default_value_t = 10)]
        cases: usize,
    },
}
