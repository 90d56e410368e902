use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Deserialize;
use tofsynth::{GenMode, Rule};

use crate::CliError;

/// Optional defaults read from a JSON file. Command-line flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub workers: Option<usize>,
    pub mode: Option<GenMode>,
    pub rule: Option<String>,
    pub eps: Option<f64>,
    pub max_count: Option<usize>,
    pub nesting: Option<usize>,
    pub seed: Option<u64>,
    pub max_entries: Option<usize>,
}

impl Config {
    pub fn load(path: Option<&Path>) -> Result<Config, CliError> {
        let Some(path) = path else {
            return Ok(Config::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))
            .map_err(|e| CliError::Usage(format!("{e:#}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    pub fn cache_dir(&self, flag: Option<PathBuf>) -> PathBuf {
        flag.or_else(|| self.cache_dir.clone()).unwrap_or_else(|| {
            if let Some(xdg) = std::env::var_os("XDG_CACHE_HOME") {
                PathBuf::from(xdg).join("tofsynth")
            } else if let Some(home) = std::env::var_os("HOME") {
                PathBuf::from(home).join(".cache").join("tofsynth")
            } else {
                std::env::temp_dir().join("tofsynth")
            }
        })
    }

    pub fn mode(&self, flag: Option<GenMode>) -> GenMode {
        flag.or(self.mode).unwrap_or_default()
    }

    pub fn rule(&self, flag: Option<Rule>) -> Result<Rule, CliError> {
        if let Some(r) = flag {
            return Ok(r);
        }
        match &self.rule {
            Some(s) => s.parse().map_err(|e| CliError::Usage(format!("config rule: {e}"))),
            None => Ok(Rule::A),
        }
    }

    pub fn eps(&self, flag: Option<f64>, default: f64) -> Result<f64, CliError> {
        let eps = flag.or(self.eps).unwrap_or(default);
        if !(eps > 0.0 && eps < 1.0) {
            return Err(CliError::Usage(format!("--eps must lie in (0, 1), got {eps}")));
        }
        Ok(eps)
    }

    pub fn max_count(&self, flag: Option<usize>, default: usize) -> usize {
        flag.or(self.max_count).unwrap_or(default)
    }

    pub fn nesting(&self, flag: Option<usize>) -> Result<usize, CliError> {
        let c = flag.or(self.nesting).unwrap_or(2);
        if c < 2 {
            return Err(CliError::Usage(format!("--nesting must be at least 2, got {c}")));
        }
        Ok(c)
    }

    pub fn max_entries(&self, flag: Option<usize>) -> usize {
        flag.or(self.max_entries)
            .unwrap_or(tofsynth::exact::MITM_MAX_ENTRIES)
    }
}
