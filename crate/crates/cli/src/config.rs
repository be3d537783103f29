//! Flat `key = value` configuration files for the `bench` subcommand.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use ratio_sparse::{Error, Result};

/// Keys accepted in a bench configuration file.
pub const BENCH_KEYS: &[&str] = &[
    "matrix", "f", "r", "m", "n", "sparsity", "trials", "seed", "solver", "box_lower", "box_upper", "rho1", "rho2",
    "eps", "max_iter", "min_sep", "threads",
];

#[derive(Debug, Default, Clone)]
pub struct FlatConfig {
    values: BTreeMap<String, String>,
}

impl FlatConfig {
    /// Blank lines and `#` comments are skipped; keys are case-sensitive and
    /// must be listed in `allowed`.
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::Parameter(format!("config line {}: expected key = value", lineno + 1)));
            };
            let key = key.trim();
            if !allowed.contains(&key) {
                return Err(Error::Parameter(format!("config line {}: unknown key {key:?}", lineno + 1)));
            }
            if values.insert(key.to_string(), value.trim().to_string()).is_some() {
                return Err(Error::Parameter(format!("config line {}: duplicate key {key:?}", lineno + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path, allowed: &[&str]) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?, allowed)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        self.values
            .get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|_| Error::Parameter(format!("config key {key:?}: cannot parse {v:?}")))
            })
            .transpose()
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

/// Comma-separated list such as `2,4,6`.
pub fn parse_list<T: FromStr>(text: &str) -> Result<Vec<T>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| Error::Parameter(format!("cannot parse list entry {s:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rejects() {
        let cfg = FlatConfig::parse("# sweep\nm = 32\nsparsity = 2, 4 # inline\n\n", BENCH_KEYS).unwrap();
        assert_eq!(cfg.get::<usize>("m").unwrap(), Some(32));
        assert_eq!(cfg.get::<usize>("n").unwrap(), None);
        assert_eq!(parse_list::<usize>(cfg.get_str("sparsity").unwrap()).unwrap(), vec![2, 4]);
        assert!(FlatConfig::parse("bogus = 1", BENCH_KEYS).is_err());
        assert!(FlatConfig::parse("m 3", BENCH_KEYS).is_err());
        assert!(FlatConfig::parse("m = 1\nm = 2", BENCH_KEYS).is_err());
        assert!(FlatConfig::parse("m = x", BENCH_KEYS).unwrap().get::<usize>("m").is_err());
    }
}
