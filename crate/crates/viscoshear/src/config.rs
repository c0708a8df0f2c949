//! Flat `key = value` configuration files.
//!
//! ```text
//! # flow
//! gamma0 = 0.15
//! gamma1 = 0.03
//! gamma2 = 0.8
//! nu = 1e-3
//! formats = csv, json
//! ```
//!
//! Every key is optional; omitted keys take the defaults of the reference
//! setup. Unknown or repeated keys are rejected with their line number.

use std::collections::BTreeSet;
use std::path::PathBuf;

use thiserror::Error;
use viscoshear_core::scenario::ScenarioConfig;
use viscoshear_core::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

/// Output formats requested for a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub svg: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Self { csv: true, json: true, svg: false }
    }
}

impl Formats {
    /// Parse a comma-separated subset of `csv,json,svg`.
    pub fn parse(list: &str) -> Result<Self, String> {
        let mut f = Self { csv: false, json: false, svg: false };
        for item in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            match item {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "svg" => f.svg = true,
                other => return Err(format!("unknown format '{other}' (expected csv, json or svg)")),
            }
        }
        Ok(f)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub scenario: ScenarioConfig,
    pub out_dir: PathBuf,
    pub formats: Formats,
}

impl Default for Config {
    fn default() -> Self {
        Self { scenario: ScenarioConfig::default(), out_dir: PathBuf::from("."), formats: Formats::default() }
    }
}

const KEYS: &[&str] = &[
    "gamma0", "gamma1", "gamma2", "nu", "M", "half_width", "n_points", "delta", "n_times", "k_min", "n_k",
    "c_max", "bounds_points", "out_dir", "formats",
];

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    let mut cfg = Config::default();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| ConfigError::Parse { line, message };
        let (key, value) = content.split_once('=').ok_or_else(|| err("expected 'key = value'".into()))?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(err(format!("unknown key '{key}'")));
        }
        if !seen.insert(key.to_string()) {
            return Err(err(format!("duplicate key '{key}'")));
        }
        let real = || value.parse::<f64>().map_err(|_| err(format!("'{key}' expects a number, got '{value}'")));
        let int = || value.parse::<usize>().map_err(|_| err(format!("'{key}' expects a nonnegative integer, got '{value}'")));
        let s = &mut cfg.scenario;
        match key {
            "gamma0" => s.gamma0 = real()?,
            "gamma1" => s.gamma1 = real()?,
            "gamma2" => s.gamma2 = real()?,
            "nu" => s.nu = real()?,
            "M" => s.m = Some(real()?),
            "half_width" => {
                s.grid.half_width = real()?;
                s.bounds_grid.half_width = s.grid.half_width;
            }
            "n_points" => s.grid.n_points = int()?,
            "delta" => s.delta = real()?,
            "n_times" => s.n_times = int()?,
            "k_min" => s.k_min = real()?,
            "n_k" => s.n_k = int()?,
            "c_max" => s.c_max = real()?,
            "bounds_points" => s.bounds_grid.n_points = int()?,
            "out_dir" => cfg.out_dir = PathBuf::from(value),
            "formats" => cfg.formats = Formats::parse(value).map_err(err)?,
            _ => unreachable!(),
        }
    }
    validate(&cfg)?;
    Ok(cfg)
}

pub fn validate(cfg: &Config) -> Result<(), ConfigError> {
    cfg.scenario.validate().map_err(|e| match e {
        Error::InvalidParameter(m) => ConfigError::Validation(m.to_string()),
        other => ConfigError::Validation(other.to_string()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_blank_lines() {
        let c = parse_config("# a comment\n\n  nu = 2e-3   # trailing\n").unwrap();
        assert_eq!(c.scenario.nu, 2e-3);
    }

    #[test]
    fn formats_list() {
        assert_eq!(Formats::parse("svg, csv").unwrap(), Formats { csv: true, json: false, svg: true });
        assert!(Formats::parse("pdf").is_err());
    }
}
