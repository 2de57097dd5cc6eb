//! Flat `key = value` configuration files and flag/file/default merging.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

/// Keys accepted in a configuration file. Each mirrors a long flag.
pub const KNOWN_KEYS: [&str; 18] = [
    "out",
    "format",
    "seed",
    "tol",
    "fixture",
    "initial",
    "t-span",
    "dt",
    "reduced",
    "samples",
    "mu",
    "mu-min",
    "mu-max",
    "mu-points",
    "c-scan",
    "mu0",
    "seed-near",
    "classify-tol",
];

/// Parsed configuration file. Keys are normalized to lower-case kebab form.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config file {}", path.display()))
    }

    /// One `key = value` per line; blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| anyhow!("line {}: expected key = value", n + 1))?;
            let key = key.trim().to_ascii_lowercase().replace('_', "-");
            if !KNOWN_KEYS.contains(&key.as_str()) {
                bail!("line {}: unknown key `{key}`", n + 1);
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                bail!("line {}: duplicate key `{key}`", n + 1);
            }
        }
        Ok(Self { values })
    }

    /// Flag value if given, otherwise the file value, otherwise `None`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v.parse().map(Some).map_err(|e| anyhow!("config key `{key}`: cannot parse `{v}`: {e}")),
        }
    }

    /// Like [`ConfigFile::resolve`] with a default.
    pub fn resolve_or<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.resolve(flag, key)?.unwrap_or(default))
    }

    /// A boolean switch: set by the flag or by `key = true` in the file.
    pub fn switch(&self, flag: bool, key: &str) -> Result<bool> {
        if flag {
            return Ok(true);
        }
        self.resolve_or(None, key, false)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_normalizes_keys() {
        let f = ConfigFile::parse("# run\nt_span = 5 # seconds\n\nFORMAT=json\n").unwrap();
        assert_eq!(f.resolve::<f64>(None, "t-span").unwrap(), Some(5.0));
        assert_eq!(f.resolve::<String>(None, "format").unwrap().as_deref(), Some("json"));
    }

    #[test]
    fn flag_beats_file_beats_default() {
        let f = ConfigFile::parse("dt = 0.5").unwrap();
        assert_eq!(f.resolve_or(Some(0.1), "dt", 0.01).unwrap(), 0.1);
        assert_eq!(f.resolve_or(None, "dt", 0.01).unwrap(), 0.5);
        assert_eq!(f.resolve_or(None, "t-span", 10.0).unwrap(), 10.0);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(ConfigFile::parse("nonsense").is_err());
        assert!(ConfigFile::parse("colour = red").is_err());
        assert!(ConfigFile::parse("dt = 1\ndt = 2").is_err());
        let f = ConfigFile::parse("dt = fast").unwrap();
        assert!(f.resolve::<f64>(None, "dt").is_err());
    }

    #[test]
    fn switch_reads_booleans() {
        let f = ConfigFile::parse("reduced = true").unwrap();
        assert!(f.switch(false, "reduced").unwrap());
        assert!(!ConfigFile::default().switch(false, "reduced").unwrap());
    }
}
