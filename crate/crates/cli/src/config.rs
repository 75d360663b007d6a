//! `key = value` configuration files. Command-line flags take precedence.

use std::collections::HashMap;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};

#[derive(Debug, Default, Clone)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are skipped; keys are case-insensitive and
    /// `-` is accepted in place of `_`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!(Usage(format!("config line {}: expected key = value", lineno + 1))))?;
            values.insert(normalize_key(key), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }
}

fn normalize_key(key: &str) -> String {
    key.trim().to_ascii_lowercase().replace('-', "_")
}

/// Validation failure; maps to exit status 2.
#[derive(Debug)]
pub struct Usage(pub String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

pub fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Usage(msg.into()).into())
}

/// Flag value, else the config file entry, else `default`.
pub fn resolve<T>(flag: Option<T>, file: &FileConfig, key: &str, default: Option<T>) -> Result<T>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    if let Some(v) = flag {
        return Ok(v);
    }
    if let Some(raw) = file.get(key) {
        return raw
            .parse()
            .map_err(|e| anyhow!(Usage(format!("config key `{key}`: cannot parse `{raw}`: {e}"))));
    }
    match default {
        Some(v) => Ok(v),
        None => usage(format!("missing required value `{key}` (flag or config file)")),
    }
}

pub fn resolve_opt<T>(flag: Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    match (flag, file.get(key)) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(_)) => resolve(None, file, key, None).map(Some),
        (None, None) => Ok(None),
    }
}

/// Comma-separated values; integer lists also accept `start:end:step`.
pub fn parse_list<T>(raw: &str) -> Result<Vec<T>>
where
    T: FromStr,
    T::Err: std::fmt::Display,
{
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<T>()
                .map_err(|e| anyhow!(Usage(format!("cannot parse `{s}`: {e}"))))
        })
        .collect()
}

pub fn parse_n_list(raw: &str) -> Result<Vec<usize>> {
    let parts: Vec<&str> = raw.split(':').map(str::trim).collect();
    match parts.as_slice() {
        [_] => parse_list(raw),
        [start, end] | [start, end, _] => {
            let step = if parts.len() == 3 { parts[2] } else { "1" };
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|e| anyhow!(Usage(format!("bad range `{raw}`: {e}"))))
            };
            let (start, end, step) = (parse(start)?, parse(end)?, parse(step)?);
            if step == 0 {
                bail!(Usage(format!("range step must be positive in `{raw}`")));
            }
            Ok((start..=end).step_by(step).collect())
        }
        _ => usage(format!("bad N list `{raw}`")),
    }
}
