//! Flat `key=value` run configuration. Command-line flags override values
//! read from a config file; both use the same key names.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::CliError;

pub const KNOWN_KEYS: &[&str] = &[
    "dist", "x0", "steps", "eps", "dwell", "trials", "grid", "seed", "threads", "out", "from", "to", "step", "offset",
    "target", "start",
];

/// Keys that never change the output and are left out of the header echo.
const NOT_ECHOED: &[&str] = &["threads", "out"];

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    values: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn parse_file_contents(text: &str) -> Result<Self, CliError> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", n + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            if !KNOWN_KEYS.contains(&k) {
                return Err(CliError::Config(format!("config line {}: unknown key '{k}'", n + 1)));
            }
            values.insert(k.to_string(), v.to_string());
        }
        Ok(RunConfig { values })
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse_file_contents(&text)
    }

    pub fn set(&mut self, key: &str, value: String) {
        self.values.insert(key.to_string(), value);
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get<T>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(s) => s.parse().map(Some).map_err(|e| CliError::Config(format!("invalid value '{s}' for {key}: {e}"))),
        }
    }

    /// Value of `key`, falling back to `default` and recording the
    /// effective value so it is echoed in the output header.
    pub fn get_or<T>(&mut self, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.get(key)? {
            Some(v) => Ok(v),
            None => {
                self.values.insert(key.to_string(), default.to_string());
                Ok(default)
            }
        }
    }

    pub fn require<T>(&self, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.get(key)?.ok_or_else(|| CliError::Config(format!("missing required value '{key}'")))
    }

    /// A strictly positive integer.
    pub fn positive(&mut self, key: &str, default: usize) -> Result<usize, CliError> {
        let v: usize = self.get_or(key, default)?;
        if v == 0 {
            return Err(CliError::Config(format!("{key} must be positive")));
        }
        Ok(v)
    }

    /// A strictly positive finite real.
    pub fn positive_real(&mut self, key: &str, default: f64) -> Result<f64, CliError> {
        let v: f64 = self.get_or(key, default)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(CliError::Config(format!("{key} must be positive")));
        }
        Ok(v)
    }

    /// `# key=value` lines for every effective setting that affects output.
    pub fn header_lines(&self, command: &str, keys: &[&str]) -> String {
        let mut out = format!("# cubic-rds {} {command}\n", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.values {
            if keys.contains(&k.as_str()) && !NOT_ECHOED.contains(&k.as_str()) {
                out.push_str(&format!("# {k}={v}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file() {
        let c = RunConfig::parse_file_contents("# comment\n\ndist=dirac:0.9\n seed = 7 \n").unwrap();
        assert_eq!(c.raw("dist"), Some("dirac:0.9"));
        assert_eq!(c.get::<u64>("seed").unwrap(), Some(7));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(RunConfig::parse_file_contents("dist dirac:0.9").is_err());
        assert!(RunConfig::parse_file_contents("colour=red").is_err());
    }

    #[test]
    fn override_and_defaults() {
        let mut c = RunConfig::parse_file_contents("trials=10\nseed=1").unwrap();
        c.set("trials", "20".into());
        assert_eq!(c.positive("trials", 5).unwrap(), 20);
        assert_eq!(c.positive("grid", 7).unwrap(), 7);
        assert!(c.get::<u64>("x0").unwrap().is_none());
        let h = c.header_lines("basin", &["trials", "grid", "seed"]);
        assert_eq!(h.lines().skip(1).collect::<Vec<_>>(), ["# grid=7", "# seed=1", "# trials=20"]);
    }

    #[test]
    fn rejects_nonpositive() {
        let mut c = RunConfig::parse_file_contents("trials=0\neps=-1").unwrap();
        assert!(c.positive("trials", 1).is_err());
        assert!(c.positive_real("eps", 1e-6).is_err());
        let c = RunConfig::parse_file_contents("seed=abc").unwrap();
        assert!(c.get::<u64>("seed").is_err());
    }
}
