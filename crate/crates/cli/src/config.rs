//! Flat `key = value` configuration files.

use std::collections::BTreeMap;
use std::path::Path;

use crate::{CliError, Result};

/// Parses `key = value` lines. Blank lines and lines starting with `#` are
/// skipped; keys are normalized to the long-flag spelling (`max_tokens`
/// and `max-tokens` are the same key).
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Config {
                line: i + 1,
                reason: "expected `key = value`".into(),
            });
        };
        let key = key.trim().replace('_', "-");
        if key.is_empty() {
            return Err(CliError::Config {
                line: i + 1,
                reason: "empty key".into(),
            });
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Config {
                line: i + 1,
                reason: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(map)
}

pub fn load_config(path: &Path) -> Result<BTreeMap<String, String>> {
    parse_config(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let map = parse_config("# run\nseed = 7\nmax_tokens=9\n\nn = 1,2\n").unwrap();
        assert_eq!(map["seed"], "7");
        assert_eq!(map["max-tokens"], "9");
        assert_eq!(map["n"], "1,2");
    }

    #[test]
    fn rejects_garbage() {
        assert!(matches!(parse_config("seed 7"), Err(CliError::Config { line: 1, .. })));
        assert!(parse_config("a = 1\na = 2").is_err());
    }
}
