//! Flat `key = value` run configuration. Command-line flags override the
//! file; the merged map is what gets hashed into a report's provenance.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    values: BTreeMap<String, String>,
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, blank lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("config line {}: expected key = value", i + 1)))?;
            let key = k.trim().replace('_', "-");
            if key.is_empty() {
                return Err(CliError::usage(format!("config line {}: empty key", i + 1)));
            }
            if values.insert(key.clone(), v.trim().to_string()).is_some() {
                return Err(CliError::usage(format!("config line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// Overrides a key when the flag was given.
    pub fn set<T: ToString>(&mut self, key: &str, value: Option<T>) {
        if let Some(v) = value {
            self.values.insert(key.to_string(), v.to_string());
        }
    }

    pub fn remove(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|e| CliError::usage(format!("{key} = {v}: {e}"))))
            .transpose()
    }

    pub fn require<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)?.ok_or_else(|| CliError::usage(format!("missing required setting {key}")))
    }

    pub fn or<T: FromStr>(&self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.get(key)?.unwrap_or(default))
    }

    /// Comma-separated list; fractions like `1/4` are accepted for numbers.
    pub fn list_f64(&self, key: &str) -> Result<Option<Vec<f64>>> {
        self.raw(key)
            .map(|v| v.split(',').map(|x| parse_fraction(x.trim()).map_err(|e| CliError::usage(format!("{key}: {e}")))).collect())
            .transpose()
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|x| x.trim().parse::<T>().map_err(|e| CliError::usage(format!("{key}: {x}: {e}"))))
                    .collect()
            })
            .transpose()
    }

    pub fn fraction(&self, key: &str) -> Result<Option<f64>> {
        self.raw(key)
            .map(|v| parse_fraction(v).map_err(|e| CliError::usage(format!("{key}: {e}"))))
            .transpose()
    }

    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// First 16 hex digits of SHA-256 over the sorted `key=value` lines.
    pub fn hash(&self) -> String {
        let mut h = Sha256::new();
        for (k, v) in &self.values {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        h.finalize()[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses `0.25` or `1/4`.
pub fn parse_fraction(s: &str) -> std::result::Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{s}: {e}"))?;
            a / b
        }
        None => s.parse().map_err(|e| format!("{s}: {e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s} is not a finite number"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut s = Settings::parse("# run\nd = 2\nepsilon = 1/4  # quarter\nseed=7\n").unwrap();
        assert_eq!(s.fraction("epsilon").unwrap(), Some(0.25));
        s.set("d", Some(3));
        s.set::<u64>("seed", None);
        assert_eq!(s.require::<usize>("d").unwrap(), 3);
        assert_eq!(s.require::<u64>("seed").unwrap(), 7);
    }

    #[test]
    fn hash_ignores_order_and_comments() {
        let a = Settings::parse("a=1\nb=2\n").unwrap();
        let b = Settings::parse("# x\nb = 2\na = 1\n").unwrap();
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), Settings::parse("a=1\nb=3").unwrap().hash());
    }

    #[test]
    fn malformed_lines() {
        assert!(Settings::parse("novalue").is_err());
        assert!(Settings::parse("a=1\na=2").is_err());
        assert!(Settings::parse("d=x").unwrap().require::<usize>("d").is_err());
        assert!(parse_fraction("1/0").is_err());
    }
}
