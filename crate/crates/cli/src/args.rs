use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "qha", version, about = "Quantum harmonic analysis on the Fock space, at desk scale")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; each one overrides the `QHA_CONFIG` file.
#[derive(Debug, Clone, Args, Default)]
pub struct GlobalArgs {
    /// Truncation dimension N.
    #[arg(long, global = true)]
    pub dim: Option<usize>,
    /// Inner block K on which identities are checked.
    #[arg(long, global = true)]
    pub inner: Option<usize>,
    /// Trusted radius R.
    #[arg(long, global = true)]
    pub radius: Option<f64>,
    /// Gauss–Laguerre order for radial integrals.
    #[arg(long = "quad-order", global = true)]
    pub quad_order: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Accept polynomially growing symbols.
    #[arg(long = "allow-unbounded", global = true)]
    pub allow_unbounded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Identities,
    Laplacian,
    Heat,
    Gelfand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Pi,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NormalizationArg {
    Corrected,
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum NamedOperator {
    Phi,
    Identity,
    Random,
}

/// Where a sequence comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SequenceSource {
    /// JSON array of numbers.
    #[arg(long = "seq-file")]
    pub seq_file: Option<PathBuf>,
    /// Inline JSON array of numbers.
    #[arg(long)]
    pub seq: Option<String>,
    /// Expression in `s`, sampled at `s = sqrt(m)` for `m < --len`.
    #[arg(long)]
    pub sample: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SequenceInput {
    #[command(flatten)]
    pub source: SequenceSource,
    /// Length for `--sample`.
    #[arg(long, default_value_t = 48)]
    pub len: usize,
}

/// Where an operator comes from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct OperatorSource {
    /// OperatorMatrix JSON file.
    #[arg(long = "op-file")]
    pub op_file: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub op: Option<NamedOperator>,
    /// Toeplitz operator of this symbol.
    #[arg(long = "toeplitz")]
    pub toeplitz: Option<String>,
    /// Diagonal operator from a JSON array of eigenvalues.
    #[arg(long = "diag-file")]
    pub diag_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Eigenvalues of a radial Toeplitz operator.
    Eigvals {
        #[arg(long)]
        symbol: String,
        /// Complex dimension n.
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 24)]
        count: usize,
        #[arg(long, value_enum, default_value_t = NormalizationArg::Corrected)]
        normalization: NormalizationArg,
    },
    /// Tridiagonal Laplacian of an eigenvalue sequence.
    Laplacian {
        #[command(flatten)]
        input: SequenceInput,
        #[arg(long, value_enum, default_value_t = ConventionArg::Pi)]
        convention: ConventionArg,
    },
    /// Berezin transform (and its Laplacian) at points.
    Berezin {
        #[command(flatten)]
        operator: OperatorSource,
        /// Point `re,im`; repeatable.
        #[arg(long = "at", required = true, allow_hyphen_values = true)]
        at: Vec<String>,
    },
    /// Heat flow of an eigenvalue sequence, `h(t) λ`.
    Heat {
        #[command(flatten)]
        input: SequenceInput,
        #[arg(long)]
        t: f64,
    },
    /// Finite-window defect `max |m Δ² x_{m-1}|`.
    Defect {
        #[command(flatten)]
        input: SequenceInput,
    },
    /// Evaluate the square-root interpolation of a sequence.
    Extend {
        #[command(flatten)]
        input: SequenceInput,
        /// Evaluation point; repeatable.
        #[arg(long = "at", required = true, allow_hyphen_values = true)]
        at: Vec<f64>,
        /// Use the even extension to the real line.
        #[arg(long)]
        real: bool,
    },
    /// Gaussian-smoothed approximant of a sequence.
    Approx {
        #[command(flatten)]
        input: SequenceInput,
        /// Smoothing bandwidth.
        #[arg(long)]
        s: f64,
    },
    /// Run an identity suite.
    Verify {
        #[arg(long, value_enum)]
        suite: SuiteArg,
    },
    /// Truncated Weyl operator matrix.
    Weyl {
        /// Point `re,im`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// `ψ * S`, or `S * T` at points when `--with-file` / `--with` is given.
    Convolve {
        #[command(flatten)]
        operator: OperatorSource,
        /// Function `ψ` for the function–operator convolution.
        #[arg(long, conflicts_with_all = ["with_file", "with"])]
        symbol: Option<String>,
        /// Heat kernel `φ_t` as `ψ`.
        #[arg(long = "heat-t", conflicts_with_all = ["symbol", "with_file", "with"])]
        heat_t: Option<f64>,
        /// Second operator `T` from a file.
        #[arg(long = "with-file")]
        with_file: Option<PathBuf>,
        /// Second operator `T` by name.
        #[arg(long, value_enum)]
        with: Option<NamedOperator>,
        /// Point `re,im` for operator–operator convolution; repeatable.
        #[arg(long = "at", allow_hyphen_values = true)]
        at: Vec<String>,
    },
}
