use std::path::Path;

use qha_core::TruncationSpec;
use serde::{Deserialize, Serialize};

use crate::args::{Format, GlobalArgs};
use crate::CliError;

/// Contents of the `QHA_CONFIG` file; every field optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    dim: Option<usize>,
    inner_dim: Option<usize>,
    radius: Option<f64>,
    quad_order: Option<usize>,
    seed: Option<u64>,
    format: Option<Format>,
    allow_unbounded: Option<bool>,
}

/// Resolved run configuration, echoed into every report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RunConfig {
    pub dim: usize,
    pub inner_dim: usize,
    pub radius: f64,
    pub quad_order: usize,
    pub seed: u64,
    pub allow_unbounded: bool,
    #[serde(skip)]
    pub format: Format,
}

impl RunConfig {
    pub fn trunc(&self) -> Result<TruncationSpec, CliError> {
        Ok(TruncationSpec::new(self.dim, self.inner_dim, self.radius)?)
    }
}

pub fn resolve(flags: &GlobalArgs, config_path: Option<&Path>) -> Result<RunConfig, CliError> {
    let file = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read QHA_CONFIG {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::Usage(format!("bad QHA_CONFIG {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let defaults = TruncationSpec::default();
    let cfg = RunConfig {
        dim: flags.dim.or(file.dim).unwrap_or(defaults.dim),
        inner_dim: flags.inner.or(file.inner_dim).unwrap_or(defaults.inner_dim),
        radius: flags.radius.or(file.radius).unwrap_or(defaults.radius),
        quad_order: flags.quad_order.or(file.quad_order).unwrap_or(96),
        seed: flags.seed.or(file.seed).unwrap_or(7),
        allow_unbounded: flags.allow_unbounded || file.allow_unbounded.unwrap_or(false),
        format: flags.format.or(file.format).unwrap_or(Format::Json),
    };
    cfg.trunc()?;
    if cfg.quad_order < 2 {
        return Err(CliError::Usage(format!("quadrature order {} is below 2", cfg.quad_order)));
    }
    Ok(cfg)
}
