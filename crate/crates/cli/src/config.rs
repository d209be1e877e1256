use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Deserialize;

/// Bench settings read from a `key = value` file. Every key is optional and
/// loses to the matching command-line flag.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchFile {
    pub family: Option<String>,
    pub rows: Option<usize>,
    pub cols: Option<usize>,
    pub n: Option<usize>,
    pub p: Option<f64>,
    pub m: Option<usize>,
    pub graph_seed: Option<u64>,
    pub graph_file: Option<PathBuf>,
    pub ks: Option<Vec<usize>>,
    pub gammas: Option<Vec<f64>>,
    pub eps_variant: Option<bool>,
    pub trials: Option<usize>,
    pub functions: Option<usize>,
    pub cap: Option<u64>,
    pub seed: Option<u64>,
    pub noise: Option<f64>,
    pub out_dir: Option<PathBuf>,
    pub target_quantile: Option<f64>,
    pub threads: Option<usize>,
    pub timing: Option<bool>,
}

impl BenchFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }
}
