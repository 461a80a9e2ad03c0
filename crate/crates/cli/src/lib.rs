//! Command-line surface of `numrad`: matrix files, analysis subcommands and a
//! seeded invariant fuzzer.

pub mod commands;
pub mod error;
pub mod fuzz;
pub mod matrix_file;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use numrad::orthkit::{Method, Norm, Side};
use numrad::Settings;

pub use error::CliError;
pub use matrix_file::{parse_matrix, parse_matrix_str, serialize_matrix, MatrixFile};
pub use report::RunReport;

#[derive(Debug, Parser)]
#[command(
    name = "numrad",
    version,
    about = "Numerical range, numerical radius and Birkhoff-James orthogonality of complex matrices"
)]
pub struct Cli {
    /// Dead zone around orthogonality margins.
    #[arg(long, global = true, default_value_t = Settings::DEFAULT.decision_tol)]
    pub tol: f64,
    /// Angles sampled on the support function [default: 2048].
    #[arg(long, global = true, env = "NUMRAD_GRID")]
    pub grid: Option<usize>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Emit the machine-readable report.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Numerical radius v(A).
    Radius { a: PathBuf },
    /// Operator norm and numerical radius of A.
    Norm { a: PathBuf },
    /// Boundary points of the numerical range.
    Range {
        a: PathBuf,
        #[arg(long, default_value_t = 64)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = OutFormat::Text)]
        out: OutFormat,
    },
    /// Crawford number: distance from 0 to the numerical range.
    Crawford { b: PathBuf },
    /// One-sided norm derivative ρ±(A, B).
    Rho {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = SideArg::Plus)]
        side: SideArg,
        #[arg(long, value_enum, default_value_t = NormArg::V)]
        norm: NormArg,
        #[arg(long, value_enum, default_value_t = MethodArg::Fd)]
        method: MethodArg,
    },
    /// Birkhoff-James orthogonality A ⊥ B.
    Orth {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, value_enum, default_value_t = NormArg::V)]
        norm: NormArg,
    },
    /// Orthogonality along the ray of positive multiples of B.
    Dirorth { a: PathBuf, b: PathBuf },
    /// Orthogonality of positive semidefinite A and B.
    Posorth { a: PathBuf, b: PathBuf },
    /// Best approximation of A from span{B} in the numerical radius.
    Approx { a: PathBuf, b: PathBuf },
    /// Triangle equality v(A + B [+ C]) = v(A) + v(B) [+ v(C)].
    Triangle { a: PathBuf, b: PathBuf, c: Option<PathBuf> },
    /// Refined triangle bound on v(A + B).
    Refined { a: PathBuf, b: PathBuf },
    /// Check the library invariants on seeded random matrices.
    Fuzz {
        #[arg(long, value_delimiter = ',', default_value = "2,3")]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Plus,
    Minus,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Plus => Side::Plus,
            SideArg::Minus => Side::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormArg {
    V,
    Op,
}

impl From<NormArg> for Norm {
    fn from(n: NormArg) -> Norm {
        match n {
            NormArg::V => Norm::NumericalRadius,
            NormArg::Op => Norm::Operator,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fd,
    State,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Fd => Method::FiniteDifference,
            MethodArg::State => Method::StateFormula,
        }
    }
}

/// What a finished command prints and how the process exits.
#[derive(Debug, Clone)]
pub struct Output {
    pub stdout: String,
    pub exit_code: i32,
}

impl Cli {
    pub fn settings(&self) -> Result<Settings, CliError> {
        if !self.tol.is_finite() || self.tol < 0.0 {
            return Err(CliError::Usage(format!(
                "--tol must be a nonnegative number, got {}",
                self.tol
            )));
        }
        let mut settings = Settings::DEFAULT.with_decision_tol(self.tol);
        if let Some(grid) = self.grid {
            if grid < 8 {
                return Err(CliError::Usage(format!("--grid must be at least 8, got {grid}")));
            }
            settings = settings.with_grid(grid);
        }
        Ok(settings)
    }
}

/// Runs a parsed command line. `echo` is the command line as typed, minus
/// the program name.
pub fn run(cli: &Cli, echo: &str) -> Result<Output, CliError> {
    let settings = cli.settings()?;
    commands::dispatch(cli, &settings, echo)
}
