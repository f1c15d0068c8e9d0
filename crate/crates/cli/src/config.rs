//! Option resolution: command-line flags, then the config file, then
//! `HGS_SEED` (seed only), then built-in defaults.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::{Deserialize, Serialize};

use hgs_core::{LatticeBounds, QuasiLatticeSpec, SpectralSet};

pub const DEFAULT_SEED: u64 = 7;
pub const SEED_ENV: &str = "HGS_SEED";

/// A configuration error; reported with exit status 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<hgs_core::Error> for ConfigError {
    fn from(e: hgs_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Translation spacing of the quasi-lattice.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Modulation spacing of the quasi-lattice.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Spectral set as `a,b[;a,b...]`.
    #[arg(long, allow_hyphen_values = true)]
    pub spectrum: Option<String>,
    /// Quadrature cells per spectral interval.
    #[arg(long)]
    pub lambda_nodes: Option<usize>,
    /// Quadrature cells are cut back to lie outside `(-lambda_min, lambda_min)`.
    #[arg(long)]
    pub lambda_min: Option<f64>,
    /// Lattice truncation `k,l,m`.
    #[arg(long)]
    pub bounds: Option<String>,
    /// Seed for random test data (also read from `HGS_SEED`).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Write the report (JSON, or CSV for `sinc`) to this path.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp from reports.
    #[arg(long)]
    pub no_timestamp: bool,
    /// JSON file with default values for any of the options above.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Print the JSON report instead of the text summary.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    alpha: Option<f64>,
    beta: Option<f64>,
    spectrum: Option<String>,
    lambda_nodes: Option<usize>,
    lambda_min: Option<f64>,
    bounds: Option<String>,
    seed: Option<u64>,
    tol: Option<f64>,
    threads: Option<usize>,
}

fn read_config(path: &Path) -> Result<ConfigFile, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config file {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| ConfigError(format!("invalid config file {}: {e}", path.display())))
}

pub fn parse_bounds(text: &str) -> Result<LatticeBounds, ConfigError> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<i64>()
                .map_err(|_| ConfigError(format!("bad bounds `{text}`, expected k,l,m")))
        })
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [k, l, m] => Ok(LatticeBounds::new(k, l, m)?),
        _ => Err(ConfigError(format!("bad bounds `{text}`, expected k,l,m"))),
    }
}

/// Fully resolved options, echoed into every report.
#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub alpha: f64,
    pub beta: f64,
    pub spectrum: SpectralSet,
    pub lambda_nodes: usize,
    pub lambda_min: f64,
    pub bounds: LatticeBounds,
    pub seed: u64,
    pub tol: f64,
    #[serde(skip)]
    pub threads: Option<usize>,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timestamp: bool,
    #[serde(skip)]
    pub json: bool,
}

/// Per-command defaults.
pub struct Defaults {
    pub bounds: LatticeBounds,
    pub lambda_min: f64,
    pub tol: f64,
    /// Cell count when none is given; may depend on the resolved bounds.
    pub lambda_nodes: fn(LatticeBounds) -> usize,
}

impl CommonArgs {
    pub fn resolve(&self, defaults: Defaults) -> Result<Resolved, ConfigError> {
        let file = match &self.config {
            Some(p) => read_config(p)?,
            None => ConfigFile::default(),
        };
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| ConfigError(format!("{SEED_ENV}=`{v}` is not a seed")))?,
            ),
            Err(_) => None,
        };
        let alpha = self.alpha.or(file.alpha).unwrap_or(1.0);
        let beta = self.beta.or(file.beta).unwrap_or(1.0);
        QuasiLatticeSpec::new(alpha, beta)?;
        let spectrum = match self.spectrum.as_ref().or(file.spectrum.as_ref()) {
            Some(s) => SpectralSet::parse(s)?,
            None => SpectralSet::interval(-1.0, 1.0)?,
        };
        let bounds = match self.bounds.as_ref().or(file.bounds.as_ref()) {
            Some(b) => parse_bounds(b)?,
            None => defaults.bounds,
        };
        let lambda_nodes = self
            .lambda_nodes
            .or(file.lambda_nodes)
            .unwrap_or((defaults.lambda_nodes)(bounds));
        let lambda_min = self
            .lambda_min
            .or(file.lambda_min)
            .unwrap_or(defaults.lambda_min);
        let tol = self.tol.or(file.tol).unwrap_or(defaults.tol);
        if tol.is_nan() || tol < 0.0 {
            return Err(ConfigError(format!(
                "tolerance must be non-negative, got {tol}"
            )));
        }
        let threads = self.threads.or(file.threads);
        if threads == Some(0) {
            return Err(ConfigError("--threads must be at least 1".into()));
        }
        Ok(Resolved {
            alpha,
            beta,
            spectrum,
            lambda_nodes,
            lambda_min,
            bounds,
            seed: self.seed.or(file.seed).or(env_seed).unwrap_or(DEFAULT_SEED),
            tol,
            threads,
            out: self.out.clone(),
            timestamp: !self.no_timestamp,
            json: self.json,
        })
    }
}

impl Resolved {
    pub fn spec(&self) -> QuasiLatticeSpec {
        QuasiLatticeSpec::new(self.alpha, self.beta).expect("validated during resolution")
    }
}
