//! `key = value` configuration files. Keys are long flag names without dashes.

use std::collections::BTreeMap;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Clone, Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

pub const KEYS: &[&str] = &[
    "max-len",
    "max-e",
    "out",
    "format",
    "hbar-max",
    "particle",
    "representation",
    "m",
    "hbar",
    "e",
    "B",
    "g",
    "levels",
    "scan-from",
    "scan-to",
    "scan-points",
    "scan-levels",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        let mut values = BTreeMap::new();
        for (k, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected `key = value`", k + 1))?;
            let key = key.trim().trim_start_matches("--");
            if !KEYS.contains(&key) {
                bail!("line {}: unknown key `{key}`", k + 1);
            }
            values.insert(key.to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &str) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {path}"))?;
        ConfigFile::parse(&text).with_context(|| format!("in config {path}"))
    }

    /// Flag value, else config value, else `default`.
    pub fn resolve<T: FromStr>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.values.get(key) {
            Some(s) => s
                .parse()
                .map_err(|e| anyhow!("config key `{key}`: cannot parse `{s}`: {e}")),
            None => Ok(default),
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}
