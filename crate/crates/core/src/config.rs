// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: built-in defaults, overridden by a `key = value`
//! file, overridden in turn by command-line flags.

use std::path::PathBuf;

use thiserror::Error;

/// Defaults and config-file values for the physical parameters and I/O.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub omega: f64,
    pub eta: f64,
    pub n_ions: u32,
    pub tau: f64,
    pub seed: u64,
    /// `None` writes to standard output.
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            omega: 1e5,
            eta: 0.1,
            n_ions: 20,
            tau: 1e-8,
            seed: 0,
            output_path: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("config line {line}: {reason}")]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

impl RunConfig {
    /// Applies a config file's contents on top of `self`.
    ///
    /// Lines are `key = value`; blank lines and `#` comments are ignored.
    /// Keys: `omega`, `eta`, `n_ions` (or `ions`), `tau`, `seed`,
    /// `output_path` (or `out`).
    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for (k, raw) in text.lines().enumerate() {
            let line = k + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let err = |reason: String| ConfigError { line, reason };
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
            let (key, value) = (key.trim(), value.trim());
            let real = || {
                value
                    .parse::<f64>()
                    .map_err(|_| err(format!("`{key}` expects a number, got `{value}`")))
            };
            let count = || {
                parse_count(value)
                    .ok_or_else(|| err(format!("`{key}` expects an integer, got `{value}`")))
            };
            match key {
                "omega" => self.omega = real()?,
                "eta" => self.eta = real()?,
                "tau" => self.tau = real()?,
                "n_ions" | "ions" => {
                    self.n_ions =
                        u32::try_from(count()?).map_err(|_| err(format!("`{key}` out of range")))?
                }
                "seed" => self.seed = count()?,
                "output_path" | "out" => self.output_path = Some(PathBuf::from(value)),
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }
        Ok(())
    }
}

/// Parses a nonnegative integer, accepting scientific notation such as
/// `1e6` when the value is integral.
pub fn parse_count(s: &str) -> Option<u64> {
    let s = s.trim();
    if let Ok(v) = s.parse::<u64>() {
        return Some(v);
    }
    let v = s.parse::<f64>().ok()?;
    (v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64).then_some(v as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_reference_regime() {
        let c = RunConfig::default();
        assert_eq!(
            (c.omega, c.eta, c.n_ions, c.tau, c.seed),
            (1e5, 0.1, 20, 1e-8, 0)
        );
        assert!(c.output_path.is_none());
    }

    #[test]
    fn file_overrides() {
        let mut c = RunConfig::default();
        c.apply_text("# comment\n omega = 2e5\nions=30 # trailing\n\nseed = 1e3\nout = x.csv\n")
            .unwrap();
        assert_eq!(c.omega, 2e5);
        assert_eq!(c.n_ions, 30);
        assert_eq!(c.seed, 1000);
        assert_eq!(c.output_path, Some(PathBuf::from("x.csv")));
        assert_eq!(c.tau, 1e-8);
    }

    #[test]
    fn errors_name_the_line() {
        let mut c = RunConfig::default();
        let e = c.apply_text("omega = 1\nbogus = 2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(c.apply_text("tau = fast").is_err());
        assert!(c.apply_text("no equals sign").is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(parse_count("1e6"), Some(1_000_000));
        assert_eq!(parse_count("42"), Some(42));
        assert_eq!(parse_count("1.5"), None);
        assert_eq!(parse_count("-3"), None);
    }
}
