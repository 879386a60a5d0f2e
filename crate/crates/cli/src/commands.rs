use std::path::Path;

use qha_core::fock::weyl_matrix;
use qha_core::gelfand::{approx_in_ddelta, extend_plus, extend_real, sample_expr_at_sqrt, SequenceFunction};
use qha_core::lab::{
    berezin, conv_fun_op_with_order, conv_op_op, laplacian_of_berezin, random_hermitian, rank_one_phi,
    toeplitz_matrix, ConvolutionMode, SymbolFunction,
};
use qha_core::radial::{
    d_delta_defect, heat_radial, laplacian_sequence_with, toeplitz_eigenvalues_with, window_looks_bounded,
    EigenSequence, LaplacianConvention, Normalization,
};
use qha_core::verify::{run_suite, Suite, VerifyConfig};
use qha_core::{parse_symbol, ComplexPoint, OperatorMatrix, QuadratureScheme, RadialSymbol};
use serde_json::{json, Value};

use crate::args::{
    Command, ConventionArg, NamedOperator, NormalizationArg, OperatorSource, SequenceInput, SuiteArg,
};
use crate::config::RunConfig;
use crate::{CliError, Outcome};

pub fn name(command: &Command) -> &'static str {
    match command {
        Command::Eigvals { .. } => "eigvals",
        Command::Laplacian { .. } => "laplacian",
        Command::Berezin { .. } => "berezin",
        Command::Heat { .. } => "heat",
        Command::Defect { .. } => "defect",
        Command::Extend { .. } => "extend",
        Command::Approx { .. } => "approx",
        Command::Verify { .. } => "verify",
        Command::Weyl { .. } => "weyl",
        Command::Convolve { .. } => "convolve",
    }
}

pub fn run(command: &Command, cfg: &RunConfig) -> Result<Outcome, CliError> {
    match command {
        Command::Eigvals { symbol, n, count, normalization } => {
            let a = RadialSymbol::parse(symbol, cfg.allow_unbounded)?;
            let q = QuadratureScheme::gauss_laguerre(cfg.quad_order)?;
            let norm = match normalization {
                NormalizationArg::Corrected => Normalization::Corrected,
                NormalizationArg::Literal => Normalization::Literal,
            };
            let values = toeplitz_eigenvalues_with(&a, *n, *count, &q, norm)?.into_values();
            let mut out = sequence_outcome(values);
            out.metadata.insert("symbol".into(), json!(a.expr().to_string()));
            out.metadata.insert("growth".into(), json!(a.growth()));
            out.metadata.insert("normalization".into(), json!(format!("{norm:?}").to_lowercase()));
            Ok(out)
        }
        Command::Laplacian { input, convention } => {
            let lambda = EigenSequence::new(read_sequence(input)?)?;
            let conv = match convention {
                ConventionArg::Pi => LaplacianConvention::Pi,
                ConventionArg::Literal => LaplacianConvention::Literal,
            };
            let mu = laplacian_sequence_with(&lambda, conv)?.into_values();
            let mut out = sequence_outcome(mu);
            let note = match conv {
                LaplacianConvention::Pi => "pi: mu_m = pi[(m+1)l_{m+1} - (2m+1)l_m + m l_{m-1}]",
                LaplacianConvention::Literal => "literal: mu_m = (m+1)l_{m+1} - (2m+1)l_m + m l_{m-1}",
            };
            out.metadata.insert("convention".into(), json!(note));
            Ok(out)
        }
        Command::Berezin { operator, at } => {
            let s = build_operator(operator, cfg)?;
            let mut rows = Vec::new();
            for text in at {
                let z = parse_point(text)?;
                let b = berezin(&s, z)?;
                let lap = laplacian_of_berezin(&s, z)?;
                rows.push(json!({"z": [z.re, z.im], "value": [b.re, b.im], "laplacian": [lap.re, lap.im]}));
            }
            Ok(Outcome { results: Value::Array(rows), ..Outcome::default() })
        }
        Command::Heat { input, t } => {
            let lambda = EigenSequence::new(read_sequence(input)?)?;
            let mut out = sequence_outcome(heat_radial(&lambda, *t)?.into_values());
            out.metadata.insert("t".into(), json!(t));
            Ok(out)
        }
        Command::Defect { input } => {
            let x = EigenSequence::new(read_sequence(input)?)?;
            let defect = d_delta_defect(&x)?;
            let v = x.values();
            let window: Vec<f64> =
                (1..v.len().saturating_sub(1)).map(|m| m as f64 * (v[m + 1] - 2.0 * v[m] + v[m - 1])).collect();
            let results = json!({
                "defect": defect,
                "len": x.len(),
                "window_looks_bounded": window_looks_bounded(&window),
            });
            Ok(Outcome { results, ..Outcome::default() })
        }
        Command::Extend { input, at, real } => {
            let sigma = SequenceFunction::new(read_sequence(input)?)?;
            let values = at
                .iter()
                .map(|&x| if *real { extend_real(&sigma, x) } else { extend_plus(&sigma, x) })
                .collect::<Result<Vec<_>, _>>()?;
            let rows: Vec<Value> = at.iter().zip(&values).map(|(x, v)| json!({"x": x, "value": v})).collect();
            let mut out = Outcome { results: Value::Array(rows), sequence: Some(values), ..Outcome::default() };
            out.metadata.insert("extension".into(), json!(if *real { "real_line" } else { "half_line" }));
            Ok(out)
        }
        Command::Approx { input, s } => {
            let sigma = SequenceFunction::new(read_sequence(input)?)?;
            let approx = approx_in_ddelta(&sigma, *s)?;
            let defect = d_delta_defect(&approx.nu.to_eigen_sequence())?;
            let results = json!({
                "nu": approx.nu.values(),
                "window": [approx.window.0, approx.window.1],
                "window_error": approx.window_error(&sigma),
                "error_bound": approx.error_bound,
                "defect": defect,
            });
            Ok(Outcome { results, sequence: Some(approx.nu.values().to_vec()), ..Outcome::default() })
        }
        Command::Verify { suite } => {
            let suite = match suite {
                SuiteArg::Identities => Suite::Identities,
                SuiteArg::Laplacian => Suite::Laplacian,
                SuiteArg::Heat => Suite::Heat,
                SuiteArg::Gelfand => Suite::Gelfand,
            };
            let vcfg = VerifyConfig { trunc: cfg.trunc()?, quad_order: cfg.quad_order, seed: cfg.seed };
            let residuals = run_suite(suite, &vcfg)?;
            let failed = residuals.iter().filter(|r| !r.pass).count();
            let results = json!({"suite": suite.name(), "checked": residuals.len(), "failed": failed});
            Ok(Outcome { results, residuals, ..Outcome::default() })
        }
        Command::Weyl { z } => {
            let w = weyl_matrix(parse_point(z)?, &cfg.trunc()?)?;
            Ok(Outcome { results: json!(w), ..Outcome::default() })
        }
        Command::Convolve { operator, symbol, heat_t, with_file, with, at } => {
            let s = build_operator(operator, cfg)?;
            let other = match (with_file, with) {
                (Some(path), _) => Some(read_operator(path, cfg)?),
                (None, Some(name)) => Some(named_operator(*name, cfg)?),
                (None, None) => None,
            };
            if let Some(t) = other {
                if at.is_empty() {
                    return Err(CliError::Usage("operator convolution needs at least one --at point".into()));
                }
                let mut rows = Vec::new();
                for text in at {
                    let z = parse_point(text)?;
                    let v = conv_op_op(&s, &t, z)?;
                    rows.push(json!({"z": [z.re, z.im], "value": [v.re, v.im]}));
                }
                let mut out = Outcome { results: Value::Array(rows), ..Outcome::default() };
                out.metadata.insert("kind".into(), json!("operator_operator"));
                out.metadata.insert("trace_class".into(), json!(true));
                return Ok(out);
            }
            let psi = match (symbol, heat_t) {
                (Some(text), _) => SymbolFunction::parse(text, cfg.allow_unbounded)?,
                (None, Some(t)) => SymbolFunction::heat_kernel(*t)?,
                (None, None) => {
                    return Err(CliError::Usage("give --symbol, --heat-t, --with or --with-file".into()))
                }
            };
            let mode = if psi.growth().is_integrable() {
                ConvolutionMode::Integrable
            } else {
                ConvolutionMode::BoundedAgainstFiniteRank
            };
            let result = conv_fun_op_with_order(&psi, &s, mode, cfg.quad_order)?;
            let mut out = Outcome { results: json!(result), ..Outcome::default() };
            out.metadata.insert("kind".into(), json!("function_operator"));
            out.metadata.insert("psi".into(), json!(psi.to_string()));
            out.metadata.insert("mode".into(), json!(mode));
            Ok(out)
        }
    }
}

fn sequence_outcome(values: Vec<f64>) -> Outcome {
    Outcome { results: json!(values), sequence: Some(values), ..Outcome::default() }
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn parse_numbers(text: &str, origin: &str) -> Result<Vec<f64>, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Usage(format!("{origin}: expected a JSON array of numbers: {e}")))
}

fn read_sequence(input: &SequenceInput) -> Result<Vec<f64>, CliError> {
    let src = &input.source;
    if let Some(path) = &src.seq_file {
        return parse_numbers(&read_file(path)?, &path.display().to_string());
    }
    if let Some(text) = &src.seq {
        return parse_numbers(text, "--seq");
    }
    let expr = parse_symbol(src.sample.as_deref().expect("clap enforces one source")).map_err(qha_core::QhaError::from)?;
    Ok(sample_expr_at_sqrt(&expr, input.len)?.values().to_vec())
}

fn parse_point(text: &str) -> Result<ComplexPoint, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let parsed: Option<Vec<f64>> = match parts.as_slice() {
        [re] => re.parse().ok().map(|re| vec![re, 0.0]),
        [re, im] => re.parse().ok().zip(im.parse().ok()).map(|(re, im)| vec![re, im]),
        _ => None,
    };
    let v = parsed.ok_or_else(|| CliError::Usage(format!("point `{text}` is not `re,im`")))?;
    Ok(ComplexPoint::new(v[0], v[1])?)
}

fn named_operator(name: NamedOperator, cfg: &RunConfig) -> Result<OperatorMatrix, CliError> {
    let trunc = cfg.trunc()?;
    Ok(match name {
        NamedOperator::Phi => rank_one_phi(&trunc),
        NamedOperator::Identity => OperatorMatrix::identity(trunc),
        NamedOperator::Random => random_hermitian(&trunc, cfg.seed, trunc.inner_dim)?,
    })
}

fn read_operator(path: &Path, cfg: &RunConfig) -> Result<OperatorMatrix, CliError> {
    let op: OperatorMatrix = serde_json::from_str(&read_file(path)?)
        .map_err(|e| CliError::Usage(format!("{}: not an operator matrix: {e}", path.display())))?;
    let trunc = cfg.trunc()?;
    if op.dim() != trunc.dim {
        return Err(CliError::Numeric(qha_core::QhaError::DimensionMismatch { expected: trunc.dim, got: op.dim() }));
    }
    Ok(OperatorMatrix::new(op.into_entries(), trunc)?)
}

fn build_operator(src: &OperatorSource, cfg: &RunConfig) -> Result<OperatorMatrix, CliError> {
    if let Some(path) = &src.op_file {
        return read_operator(path, cfg);
    }
    if let Some(name) = src.op {
        return named_operator(name, cfg);
    }
    let trunc = cfg.trunc()?;
    if let Some(text) = &src.toeplitz {
        return Ok(toeplitz_matrix(&SymbolFunction::parse(text, cfg.allow_unbounded)?, &trunc)?);
    }
    let path = src.diag_file.as_deref().expect("clap enforces one source");
    let values = parse_numbers(&read_file(path)?, &path.display().to_string())?;
    if values.len() != trunc.dim {
        return Err(CliError::Numeric(qha_core::QhaError::DimensionMismatch { expected: trunc.dim, got: values.len() }));
    }
    Ok(OperatorMatrix::diagonal(trunc, &values))
}
