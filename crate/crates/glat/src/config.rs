//! Runtime configuration: enumeration guards, seeds and output format.

use serde::{Deserialize, Serialize};

pub const DEFAULT_MAX_ELEMENTS: usize = 200_000;

/// Guards and seeds shared by enumerations and verification suites.
/// Unknown keys in a config file are rejected.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    /// Hard cap on the number of elements any enumeration may visit.
    pub max_elements: usize,
    /// Default degree bound for cone enumerations.
    pub max_degree: u32,
    /// Seed for the deterministic generators in randomized suites.
    pub seed: u64,
}

impl Default for Config {
    fn default() -> Config {
        Config { max_elements: DEFAULT_MAX_ELEMENTS, max_degree: 6, seed: 0 }
    }
}

impl Config {
    /// Default configuration with the `GLAT_MAX_ENUM` environment override
    /// applied.
    pub fn from_env() -> Config {
        let mut c = Config::default();
        if let Ok(v) = std::env::var("GLAT_MAX_ENUM") {
            if let Ok(n) = v.trim().parse::<usize>() {
                c.max_elements = n;
            }
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unknown_keys() {
        let r: Result<Config, _> = serde_json::from_str(r#"{"max_elements": 10, "bogus": 1}"#);
        assert!(r.is_err());
        let c: Config = serde_json::from_str(r#"{"max_elements": 10}"#).unwrap();
        assert_eq!(c.max_elements, 10);
        assert_eq!(c.seed, 0);
    }
}
