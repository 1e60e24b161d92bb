//! Plain `key = value` settings files merged under command-line flags.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use crate::error::{invalid, CliError, CliResult};

/// Comma-separated list of reals, e.g. `0,0.001,0.01`.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let items = s
            .split(',')
            .map(|item| item.trim().parse::<f64>().map_err(|e| format!("{item:?}: {e}")))
            .collect::<Result<Vec<_>, _>>()?;
        if items.is_empty() {
            return Err("empty list".into());
        }
        Ok(RealList(items))
    }
}

/// Settings read from a file. Keys are consumed as they are resolved so that
/// leftovers can be reported as unknown.
#[derive(Debug, Default)]
pub struct Settings {
    source: String,
    values: BTreeMap<String, String>,
}

impl Settings {
    pub fn load(path: Option<&Path>) -> CliResult<Self> {
        let Some(path) = path else {
            return Ok(Settings::default());
        };
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Settings::parse(&text, &path.display().to_string())
    }

    pub fn parse(text: &str, source: &str) -> CliResult<Self> {
        let mut values = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return invalid(format!("{source}:{}: expected `key = value`", lineno + 1));
            };
            let key = key.trim().replace('_', "-");
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return invalid(format!("{source}:{}: duplicate key `{key}`", lineno + 1));
            }
        }
        Ok(Settings {
            source: source.to_string(),
            values,
        })
    }

    /// Flag value if given, else the file value, else `default`.
    pub fn pick<T>(&mut self, key: &str, flag: Option<T>, default: Option<T>) -> CliResult<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let from_file = self.values.remove(key);
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(text) = from_file {
            return text
                .parse()
                .map_err(|e| CliError::Invalid(format!("{}: `{key}`: {e}", self.source)));
        }
        default.ok_or_else(|| CliError::Invalid(format!("missing required setting `{key}`")))
    }

    pub fn pick_optional<T>(&mut self, key: &str, flag: Option<T>) -> CliResult<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        let from_file = self.values.remove(key);
        match (flag, from_file) {
            (Some(v), _) => Ok(Some(v)),
            (None, Some(text)) => text
                .parse()
                .map(Some)
                .map_err(|e| CliError::Invalid(format!("{}: `{key}`: {e}", self.source))),
            (None, None) => Ok(None),
        }
    }

    pub fn finish(self) -> CliResult<()> {
        match self.values.keys().next() {
            Some(key) => invalid(format!("{}: unknown setting `{key}`", self.source)),
            None => Ok(()),
        }
    }
}
