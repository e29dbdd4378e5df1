//! Optional `key=value` configuration file.

use std::fmt;
use std::path::Path;

pub const DEFAULT_ORACLE_BOUND: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Config {
    pub oracle_bound: Option<u64>,
    pub sweep_parallel: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

impl Config {
    /// Blank lines and lines starting with `#` are ignored. Unknown keys
    /// are rejected so typos do not pass silently.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut config = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| ConfigError { line: i + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected key=value, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "oracle_bound" => {
                    let bound: u64 = value.parse().map_err(|e| err(format!("oracle_bound: {e}")))?;
                    if bound == 0 {
                        return Err(err(String::from("oracle_bound must be positive")));
                    }
                    config.oracle_bound = Some(bound);
                }
                "sweep_parallel" => {
                    let workers: usize = value.parse().map_err(|e| err(format!("sweep_parallel: {e}")))?;
                    if workers == 0 {
                        return Err(err(String::from("sweep_parallel must be positive")));
                    }
                    config.sweep_parallel = Some(workers);
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        Self::parse(&text)
    }

    pub fn oracle_bound(&self) -> u64 {
        self.oracle_bound.unwrap_or(DEFAULT_ORACLE_BOUND)
    }
}
