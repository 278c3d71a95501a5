//! Flat `key = value` configuration files.
//!
//! One setting per line, `#` starts a comment, blank lines are ignored.
//! Keys are the long flag names with `-` or `_` (`max-iter`, `max_iter`);
//! system parameters use `param.NAME = V[,V...]`.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

#[derive(Debug, Default, Clone)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected `key = value`", n + 1))?;
            let key = key.trim().replace('-', "_");
            if key.is_empty() {
                return Err(format!("line {}: empty key", n + 1));
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// `param.NAME` entries with the prefix removed.
    pub fn params(&self) -> impl Iterator<Item = (&str, &str)> {
        self.values
            .iter()
            .filter_map(|(k, v)| k.strip_prefix("param.").map(|name| (name, v.as_str())))
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_pairs() {
        let c = ConfigFile::parse("# run\nsystem = pendulum\nmax-iter=12 # cap\n\nparam.omega = 2\n").unwrap();
        assert_eq!(c.get("system"), Some("pendulum"));
        assert_eq!(c.get("max_iter"), Some("12"));
        assert_eq!(c.params().collect::<Vec<_>>(), vec![("omega", "2")]);
        assert!(ConfigFile::parse("novalue\n").is_err());
    }
}
