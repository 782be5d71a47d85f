use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Tolerances used by the suite, with their defaults.
pub const TOLERANCES: &[(&str, f64)] = &[
    ("eig_residual", 1e-10),
    ("defect", 1e-7),
    ("constructive", 1e-8),
    ("window", 1e-6),
    ("additivity", 1e-8),
    ("gap", 1e-8),
    ("jensen", 1e-8),
    ("joint_convexity", 1e-7),
    ("sandwich", 1e-6),
    ("pairing", 1e-12),
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: u64,
    pub n: usize,
    pub budget: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub output_path: Option<PathBuf>,
    /// `None` runs every check; `Some(list)` keeps the checks touching a
    /// listed norm, so an empty list selects nothing.
    pub norms: Option<Vec<String>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            n: 3,
            budget: 500,
            tolerances: BTreeMap::new(),
            output_path: None,
            norms: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let cfg: RunConfig = serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> CliResult<()> {
        if self.n == 0 || self.n > 8 {
            return Err(CliError::Config(format!("n must be in 1..=8, got {}", self.n)));
        }
        if self.budget == 0 {
            return Err(CliError::Config("budget must be positive".into()));
        }
        for (name, value) in &self.tolerances {
            if !TOLERANCES.iter().any(|(known, _)| known == name) {
                return Err(CliError::Config(format!("unknown tolerance `{name}`")));
            }
            if !(value.is_finite() && *value >= 0.0) {
                return Err(CliError::Config(format!("tolerance `{name}` must be a nonnegative number")));
            }
        }
        if let Some(norms) = &self.norms {
            for name in norms {
                name.parse::<cstar_core::NormSpec>()?;
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            TOLERANCES
                .iter()
                .find(|(known, _)| *known == name)
                .map(|(_, v)| *v)
                .unwrap_or_else(|| panic!("tolerance `{name}` is not registered"))
        })
    }
}

/// Parses `name=value`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("bad tolerance value `{value}`"))?;
    Ok((name.trim().to_string(), value))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let mut cfg = RunConfig::default();
        assert_eq!(cfg.tolerance("defect"), 1e-7);
        cfg.tolerances.insert("defect".into(), 1e-3);
        assert_eq!(cfg.tolerance("defect"), 1e-3);
        cfg.validate().unwrap();
        cfg.tolerances.insert("nonsense".into(), 1.0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn parses_partial_json() {
        let cfg: RunConfig = serde_json::from_str(r#"{"seed": 7, "norms": []}"#).unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.budget, 500);
        assert_eq!(cfg.norms, Some(vec![]));
        assert!(serde_json::from_str::<RunConfig>(r#"{"sede": 7}"#).is_err());
    }

    #[test]
    fn tolerance_flags() {
        assert_eq!(parse_tolerance("eig_residual=1e-15").unwrap(), ("eig_residual".into(), 1e-15));
        assert!(parse_tolerance("eig_residual").is_err());
        assert!(parse_tolerance("x=abc").is_err());
    }
}
