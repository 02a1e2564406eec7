use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{config_err, CliError, Result};

/// Flat key = value settings; every key must be consumed by the experiment.
#[derive(Debug, Clone, Default)]
pub struct Config {
    values: BTreeMap<String, String>,
}

fn normalize(key: &str) -> String {
    key.trim().replace('-', "_")
}

impl Config {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return config_err(format!("line {}: expected key = value, got {raw:?}", i + 1));
            };
            let key = normalize(key);
            if key.is_empty() {
                return config_err(format!("line {}: empty key", i + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Applies `--key value` or `--key=value` overrides.
    pub fn apply_overrides(&mut self, args: &[String]) -> Result<()> {
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let Some(flag) = arg.strip_prefix("--") else {
                return config_err(format!("expected --key value override, got {arg:?}"));
            };
            let (key, value) = match flag.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it.next().ok_or_else(|| CliError::Config(format!("override --{flag} has no value")))?;
                    (flag.to_string(), v.clone())
                }
            };
            self.set(&key, &value);
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) {
        self.values.insert(normalize(key), value.trim().to_string());
    }

    fn take_raw(&mut self, key: &str) -> Option<String> {
        self.values.remove(key)
    }

    pub fn take<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take_raw(key) {
            Some(v) => v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}"))),
            None => Ok(default),
        }
    }

    pub fn take_opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        self.take_raw(key)
            .map(|v| v.parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {v:?}"))))
            .transpose()
    }

    /// Comma-separated list.
    pub fn take_list<T: FromStr>(&mut self, key: &str, default: Vec<T>) -> Result<Vec<T>> {
        match self.take_raw(key) {
            Some(v) => v
                .split(',')
                .map(|p| p.trim().parse().map_err(|_| CliError::Config(format!("{key}: cannot parse {p:?}"))))
                .collect(),
            None => Ok(default),
        }
    }

    /// A real number, also accepted as a fraction a/b.
    pub fn take_f64(&mut self, key: &str, default: f64) -> Result<f64> {
        match self.take_raw(key) {
            Some(v) => parse_real(key, &v),
            None => Ok(default),
        }
    }

    pub fn take_f64_opt(&mut self, key: &str) -> Result<Option<f64>> {
        self.take_raw(key).map(|v| parse_real(key, &v)).transpose()
    }

    pub fn take_f64_list(&mut self, key: &str, default: Vec<f64>) -> Result<Vec<f64>> {
        match self.take_raw(key) {
            Some(v) => v.split(',').map(|p| parse_real(key, p)).collect(),
            None => Ok(default),
        }
    }

    pub fn finish(self) -> Result<()> {
        if self.values.is_empty() {
            Ok(())
        } else {
            let keys: Vec<&str> = self.values.keys().map(String::as_str).collect();
            config_err(format!("unknown key(s): {}", keys.join(", ")))
        }
    }
}

fn parse_real(key: &str, text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || CliError::Config(format!("{key}: cannot parse {text:?} as a number"));
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let (a, b): (f64, f64) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
            a / b
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}
