//! Optional TOML file supplying defaults for command-line flags.

use anyhow::{Context, Result};
use serde::Deserialize;

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FileConfig {
    pub dim_cap: Option<usize>,
    pub eval: EvalDefaults,
    pub table1: Table1Defaults,
    pub fig1: Fig1Defaults,
    pub oracle_check: OracleDefaults,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvalDefaults {
    pub rho: Option<String>,
    pub theorem: Option<u8>,
    pub k: Option<usize>,
    pub preset: Option<String>,
    pub pairwise: Option<bool>,
    pub csv: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Table1Defaults {
    pub n: Option<usize>,
    pub tol: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig1Defaults {
    pub n: Option<usize>,
    pub d: Option<usize>,
    pub grid: Option<usize>,
    pub tol: Option<f64>,
    pub swapped: Option<bool>,
    pub pairwise_k1: Option<bool>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleDefaults {
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&std::path::Path>) -> Result<Self> {
        let Some(path) = path else { return Ok(Self::default()) };
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}
