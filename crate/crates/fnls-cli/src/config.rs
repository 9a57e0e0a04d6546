//! Flat key-value config files.
//!
//! One `key = value` pair per line, `#` comments, blank lines ignored.
//! Sections are spelled with dotted keys (`grid.points`, `params.alpha`);
//! there is no nesting. Parse errors carry the offending line number.

use std::collections::BTreeMap;
use std::fmt;

use fnls_core::functional::Params;

#[derive(Debug)]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ConfigError {}

/// Parsed config: keys to (value, line).
#[derive(Debug, Clone, Default)]
pub struct Config {
    entries: BTreeMap<String, (String, usize)>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, ConfigError> {
        let mut entries = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError {
                    line: line_no,
                    message: format!("expected 'key = value', got '{line}'"),
                });
            };
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(ConfigError { line: line_no, message: "empty key".into() });
            }
            if entries.insert(key.to_string(), (value.to_string(), line_no)).is_some() {
                return Err(ConfigError {
                    line: line_no,
                    message: format!("duplicate key '{key}'"),
                });
            }
        }
        Ok(Config { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, (v, _))| (k.as_str(), v.as_str()))
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map(|(_, l)| *l).unwrap_or(0)
    }

    pub fn require(&self, key: &str) -> Result<&str, ConfigError> {
        self.get(key).ok_or_else(|| ConfigError {
            line: 0,
            message: format!("missing required key '{key}'"),
        })
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, ConfigError> {
        let raw = self.require(key)?;
        raw.parse().map_err(|_| ConfigError {
            line: self.line_of(key),
            message: format!("key '{key}': '{raw}' is not a number"),
        })
    }

    pub fn f64_or(&self, key: &str, default: f64) -> Result<f64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(_) => self.require_f64(key),
        }
    }

    pub fn require_usize(&self, key: &str) -> Result<usize, ConfigError> {
        let raw = self.require(key)?;
        raw.parse().map_err(|_| ConfigError {
            line: self.line_of(key),
            message: format!("key '{key}': '{raw}' is not a non-negative integer"),
        })
    }

    pub fn usize_or(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(_) => self.require_usize(key),
        }
    }

    pub fn u64_or(&self, key: &str, default: u64) -> Result<u64, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(raw) => raw.parse().map_err(|_| ConfigError {
                line: self.line_of(key),
                message: format!("key '{key}': '{raw}' is not a non-negative integer"),
            }),
        }
    }

    pub fn bool_or(&self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(raw) => Err(ConfigError {
                line: self.line_of(key),
                message: format!("key '{key}': '{raw}' is not a boolean"),
            }),
        }
    }

    /// Comma-separated list of numbers.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let raw = self.require(key)?;
        raw.split(',')
            .map(|piece| {
                piece.trim().parse().map_err(|_| ConfigError {
                    line: self.line_of(key),
                    message: format!("key '{key}': '{piece}' is not a number"),
                })
            })
            .collect()
    }

    /// Semicolon-separated list of `a:b` mass pairs.
    pub fn mass_pairs(&self, key: &str) -> Result<Vec<(f64, f64)>, ConfigError> {
        let raw = self.require(key)?;
        raw.split(';')
            .map(|piece| {
                let piece = piece.trim();
                let Some((a, b)) = piece.split_once(':') else {
                    return Err(ConfigError {
                        line: self.line_of(key),
                        message: format!("key '{key}': '{piece}' is not 'mass1:mass2'"),
                    });
                };
                let parse = |s: &str| {
                    s.trim().parse::<f64>().map_err(|_| ConfigError {
                        line: self.line_of(key),
                        message: format!("key '{key}': '{s}' is not a number"),
                    })
                };
                Ok((parse(a)?, parse(b)?))
            })
            .collect()
    }
}

const PARAM_KEYS: [&str; 10] =
    ["alpha", "mu1", "mu2", "p1", "p2", "beta", "r1", "r2", "tau1", "tau2"];

/// Model parameters from a config, keys prefixed (`params.alpha`, ...).
pub fn params_from_config(cfg: &Config, prefix: &str) -> Result<Params, ConfigError> {
    let v = |name: &str| cfg.require_f64(&format!("{prefix}{name}"));
    Ok(Params {
        alpha: v("alpha")?,
        mu1: v("mu1")?,
        mu2: v("mu2")?,
        p1: v("p1")?,
        p2: v("p2")?,
        beta: v("beta")?,
        r1: v("r1")?,
        r2: v("r2")?,
        tau1: v("tau1")?,
        tau2: v("tau2")?,
    })
}

/// Serialize parameters as the flat key-value record (bare keys, one per line).
pub fn params_to_kv(params: &Params) -> String {
    let vals = [
        params.alpha,
        params.mu1,
        params.mu2,
        params.p1,
        params.p2,
        params.beta,
        params.r1,
        params.r2,
        params.tau1,
        params.tau2,
    ];
    let mut out = String::new();
    for (key, val) in PARAM_KEYS.iter().zip(vals) {
        out.push_str(key);
        out.push_str(" = ");
        out.push_str(&format!("{val}"));
        out.push('\n');
    }
    out
}

/// Parse parameters from the flat key-value record (bare keys).
pub fn params_from_kv(text: &str) -> Result<Params, ConfigError> {
    let cfg = Config::parse(text)?;
    params_from_config(&cfg, "")
}
