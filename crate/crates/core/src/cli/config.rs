//! Plain-text `key = value` settings file.
//!
//! ```text
//! # search
//! budget = 20000000000
//! threads = 8
//! stream_budget = 100000
//! partition_budget = 10000000
//! seed = 1
//! format = records
//! convention = equal
//! cache = /var/cache/sumfree
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. Command-line flags
//! override every key.

use std::path::{Path, PathBuf};

use crate::enumeration::SearchConfig;
use crate::error::{Error, Result};
use crate::partitions::DEFAULT_BUDGET;
use crate::sets::Convention;

use super::output::Format;

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub budget: u64,
    pub threads: usize,
    pub stream_budget: u64,
    pub partition_budget: u64,
    pub seed: u64,
    pub format: Format,
    pub convention: Convention,
    pub cache: Option<PathBuf>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            budget: SearchConfig::default().budget,
            threads: 1,
            stream_budget: 100_000,
            partition_budget: DEFAULT_BUDGET,
            seed: 0,
            format: Format::Table,
            convention: Convention::default(),
            cache: None,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .replace('_', "")
        .parse()
        .map_err(|_| Error::invalid(format!("config key `{key}`: cannot parse `{value}`")))
}

impl Config {
    pub fn parse(text: &str) -> Result<Config> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("config line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "budget" => cfg.budget = number(key, value)?,
                "threads" => cfg.threads = number(key, value)?,
                "stream_budget" => cfg.stream_budget = number(key, value)?,
                "partition_budget" => cfg.partition_budget = number(key, value)?,
                "seed" => cfg.seed = number(key, value)?,
                "format" => cfg.format = Format::parse(value)?,
                "convention" => {
                    cfg.convention = Convention::parse(value)
                        .ok_or_else(|| Error::invalid(format!("unknown convention `{value}`")))?
                }
                "cache" => cfg.cache = Some(PathBuf::from(value)),
                other => return Err(Error::invalid(format!("config line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config> {
        Config::parse(&std::fs::read_to_string(path)?)
    }

    pub fn search(&self) -> SearchConfig {
        SearchConfig { budget: self.budget, threads: self.threads }
    }
}
