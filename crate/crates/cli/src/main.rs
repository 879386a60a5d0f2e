//! `qha`: command-line front end for `qha-core`.
//!
//! Exit codes: 0 when every residual passes, 1 on numerical failure or a failed
//! residual (a report is still written), 2 on usage errors.

mod args;
mod commands;
mod config;

use std::collections::BTreeMap;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use qha_core::verify::Residual;
use qha_core::QhaError;
use serde::Serialize;
use serde_json::Value;

use args::{Cli, Format};

pub const SCHEMA: &str = "qha-report/1";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(QhaError),
}

impl From<QhaError> for CliError {
    fn from(e: QhaError) -> Self {
        match e {
            QhaError::Parse(_) | QhaError::UnboundedSymbol { .. } | QhaError::InvalidArgument(_) => {
                CliError::Usage(e.to_string())
            }
            other => CliError::Numeric(other),
        }
    }
}

/// What a subcommand produced.
#[derive(Debug, Default)]
pub struct Outcome {
    pub results: Value,
    pub residuals: Vec<Residual>,
    pub metadata: BTreeMap<String, Value>,
    /// Set for sequence-valued results; enables CSV output.
    pub sequence: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    schema: &'static str,
    command: &'a [String],
    subcommand: &'a str,
    config: &'a config::RunConfig,
    metadata: BTreeMap<String, Value>,
    results: Value,
    residuals: Vec<Residual>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    wall_time_s: f64,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let start = Instant::now();
    let config_path = std::env::var_os("QHA_CONFIG").map(std::path::PathBuf::from);
    let cfg = match config::resolve(&cli.global, config_path.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => return usage(&e),
    };
    let subcommand = commands::name(&cli.command);
    let (outcome, error) = match commands::run(&cli.command, &cfg) {
        Ok(outcome) => (outcome, None),
        Err(CliError::Usage(msg)) => return usage(&CliError::Usage(msg)),
        Err(CliError::Numeric(e)) => (Outcome::default(), Some(e.to_string())),
    };
    if cfg.format == Format::Csv && outcome.sequence.is_none() && error.is_none() {
        return usage(&CliError::Usage(format!("`{subcommand}` has no sequence output; CSV is unavailable")));
    }
    let pass = error.is_none() && outcome.residuals.iter().all(|r| r.pass);
    let mut metadata = outcome.metadata;
    metadata.insert(
        "laplacian_convention".into(),
        Value::from("operator Laplacian ∂∂̄ = (∂x² + ∂y²)/4; sequence Laplacian μ_m carries the factor π"),
    );
    let text = match (cfg.format, &outcome.sequence) {
        (Format::Csv, Some(values)) => {
            let mut csv = String::from("index,value\n");
            for (i, v) in values.iter().enumerate() {
                csv.push_str(&format!("{i},{v:e}\n"));
            }
            csv
        }
        _ => {
            let report = RunReport {
                schema: SCHEMA,
                command: &argv[1..],
                subcommand,
                config: &cfg,
                metadata,
                results: outcome.results,
                residuals: outcome.residuals,
                pass,
                error: error.clone(),
                wall_time_s: start.elapsed().as_secs_f64(),
            };
            let mut json = serde_json::to_string_pretty(&report).expect("report serializes");
            json.push('\n');
            json
        }
    };
    if let Err(e) = emit(&text, cli.global.out.as_deref()) {
        eprintln!("qha: cannot write report: {e}");
        return ExitCode::from(1);
    }
    if let Some(e) = error {
        eprintln!("qha: {e}");
    }
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(text: &str, out: Option<&std::path::Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn usage(e: &CliError) -> ExitCode {
    eprintln!("qha: {e}");
    ExitCode::from(2)
}
