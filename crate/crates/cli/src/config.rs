//! Flat key=value experiment configuration. Lines are `key = value`;
//! blank lines and `#` comments are ignored. Unknown keys are rejected up
//! front so typos cannot silently fall back to defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::error::CliError;

/// Every key any subcommand understands.
const KNOWN_KEYS: &[&str] = &[
    // Graph source.
    "graph",
    "family",
    "n",
    "p",
    "m0",
    "m",
    "rows",
    "cols",
    "directed",
    "graph_seed",
    // Model and weights.
    "model",
    "explicit_file",
    "weights",
    "gamma_min",
    "gamma_max",
    // Bound study.
    "seeds",
    "gamma_steps",
    "gamma_step",
    // Maximization study.
    "k",
    "objectives",
    "replications",
    // Bandit game.
    "adversary",
    "player",
    "horizon",
    "episodes",
    "c",
    "d",
    "delta",
    "distinguished",
    "open_prob",
    "eta",
    "alpha",
    "log_episodes",
    // Shared.
    "seed",
];

#[derive(Debug, Default)]
pub struct ExperimentConfig {
    values: BTreeMap<String, String>,
    source: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::validation(format!("cannot read config {}: {e}", path.display()))
        })?;
        let mut values = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::validation(format!(
                    "{}:{}: expected `key = value`, got `{line}`",
                    path.display(),
                    ln + 1
                ))
            })?;
            let key = key.trim().to_string();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(CliError::validation(format!(
                    "{}:{}: unknown key `{key}`",
                    path.display(),
                    ln + 1
                )));
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(CliError::validation(format!(
                    "{}:{}: duplicate key `{key}`",
                    path.display(),
                    ln + 1
                )));
            }
        }
        Ok(Self {
            values,
            source: Some(path.to_path_buf()),
        })
    }

    pub fn load_optional(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            Some(p) => Self::load(p),
            None => Ok(Self::default()),
        }
    }

    /// Directory of the config file; relative paths in the config resolve
    /// against it.
    pub fn resolve(&self, value: &str) -> PathBuf {
        let p = Path::new(value);
        if p.is_absolute() {
            return p.to_path_buf();
        }
        match &self.source {
            Some(src) => src.parent().unwrap_or(Path::new(".")).join(p),
            None => p.to_path_buf(),
        }
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.raw(key)
            .ok_or_else(|| CliError::validation(format!("config key `{key}` is required")))
    }

    pub fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v.parse::<T>().map(Some).map_err(|_| {
                CliError::validation(format!("config key `{key}`: cannot parse `{v}`"))
            }),
        }
    }

    pub fn parse_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    pub fn usize_list(&self, key: &str) -> Result<Option<Vec<usize>>, CliError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<usize>().map_err(|_| {
                        CliError::validation(format!("config key `{key}`: bad entry `{s}`"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()
                .map(Some),
        }
    }

    pub fn string_list(&self, key: &str) -> Option<Vec<String>> {
        self.raw(key)
            .map(|v| v.split(',').map(|s| s.trim().to_string()).collect())
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.raw(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(v) => Err(CliError::validation(format!(
                "config key `{key}`: expected true/false, got `{v}`"
            ))),
        }
    }
}
