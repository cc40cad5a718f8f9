//! Run configuration of the verification suites.
//!
//! A configuration can be read from JSON or assembled from command-line
//! flags. JSON errors are reported with the path of the offending field.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wave_space::{GridSettings, GridSpec};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_917;

/// Number of randomized instances per identity in the exact-algebra and
/// flow suites.
pub const DEFAULT_INSTANCES: usize = 10_000;

/// A verification suite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Exact spinor and Dirac-matrix identities.
    Spinor,
    /// The conformal flow, its Jacobian and the Möbius action.
    Flow,
    /// Sampled Weyl waves: Parseval, evolution, the V map, generated waves.
    Wave,
    /// The modular group on waves and its generator.
    Modular,
    /// Relative entropy of Majorana states.
    Entropy,
}

impl Suite {
    /// All suites in canonical order.
    pub const ALL: [Suite; 5] = [Self::Spinor, Self::Flow, Self::Wave, Self::Modular, Self::Entropy];

    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Self::Spinor => "spinor",
            Self::Flow => "flow",
            Self::Wave => "wave",
            Self::Modular => "modular",
            Self::Entropy => "entropy",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|suite| suite.name() == s).ok_or_else(|| {
            Error::InvalidInput(format!(
                "suite: unknown suite '{s}' (expected one of spinor, flow, wave, modular, entropy)"
            ))
        })
    }
}

/// Everything a suite run depends on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Selected suite.
    pub suite: Suite,
    /// Grid override; each suite has its own default.
    #[serde(default)]
    pub grid: Option<GridSettings>,
    /// Generator-convergence steps of the modular suite.
    #[serde(default)]
    pub lambdas: Option<Vec<f64>>,
    /// RNG seed.
    #[serde(default = "default_seed")]
    pub seed: u64,
    /// Randomized instances per identity.
    #[serde(default)]
    pub instances: Option<usize>,
    /// Tolerance overrides keyed by check name (per-state entropy checks
    /// use the name without the state suffix).
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    /// Extra Majorana state file for the entropy suite.
    #[serde(default)]
    pub state: Option<PathBuf>,
    /// Report path.
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl RunConfig {
    /// Configuration with defaults for everything but the suite.
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            grid: None,
            lambdas: None,
            seed: DEFAULT_SEED,
            instances: None,
            tolerances: BTreeMap::new(),
            state: None,
            out: None,
        }
    }

    /// Parses a JSON configuration.
    pub fn from_json_str(text: &str) -> Result<Self> {
        parse_json_with_path(text)
    }

    /// Reads a JSON configuration file.
    pub fn from_path(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    /// Number of randomized instances.
    pub fn instances(&self) -> usize {
        self.instances.unwrap_or(DEFAULT_INSTANCES)
    }

    /// The grid override as a validated grid.
    pub fn grid_override(&self) -> Result<Option<GridSpec>> {
        self.grid
            .map(GridSpec::try_from)
            .transpose()
            .map_err(|e| Error::InvalidInput(format!("grid: {e}")))
    }

    /// Checks every field against the selected suite.
    pub fn validate(&self, known_checks: &[&str]) -> Result<()> {
        self.grid_override()?;
        if let Some(lambdas) = &self.lambdas {
            if lambdas.is_empty() {
                return Err(Error::InvalidInput("lambdas: list is empty".into()));
            }
            for (i, l) in lambdas.iter().enumerate() {
                if !(l.is_finite() && *l > 0.0) {
                    return Err(Error::InvalidInput(format!(
                        "lambdas[{i}]: steps must be finite and positive, got {l}"
                    )));
                }
            }
            if lambdas.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidInput("lambdas: steps must be strictly decreasing".into()));
            }
        }
        if self.instances == Some(0) {
            return Err(Error::InvalidInput("instances: must be at least 1".into()));
        }
        for (name, tol) in &self.tolerances {
            if !known_checks.contains(&name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "tolerances.{name}: no such check in suite {}",
                    self.suite
                )));
            }
            if !(tol.is_finite() && *tol >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "tolerances.{name}: must be finite and non-negative, got {tol}"
                )));
            }
        }
        if let Some(state) = &self.state {
            if self.suite != Suite::Entropy {
                return Err(Error::InvalidInput(format!(
                    "state: only the entropy suite reads a state file, got suite {}",
                    self.suite
                )));
            }
            if !state.is_file() {
                return Err(Error::InvalidInput(format!("state: {} is not a file", state.display())));
            }
        }
        Ok(())
    }
}

/// Deserializes JSON, reporting the path of the failing field.
pub fn parse_json_with_path<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        Error::InvalidInput(format!("{path}: {}", e.into_inner()))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        let err = "spinors".parse::<Suite>().unwrap_err().to_string();
        assert!(err.contains("unknown suite 'spinors'"));
    }

    #[test]
    fn json_config_parses_with_defaults() {
        let c = RunConfig::from_json_str(r#"{"suite": "wave", "grid": {"L": 2.0, "N": 24}}"#).unwrap();
        assert_eq!(c.suite, Suite::Wave);
        assert_eq!(c.seed, DEFAULT_SEED);
        assert_eq!(c.instances(), DEFAULT_INSTANCES);
        assert_eq!(c.grid_override().unwrap().unwrap().points(), 24);
    }

    #[test]
    fn errors_carry_the_field_path() {
        let err = RunConfig::from_json_str(r#"{"suite": "wave", "grid": {"L": 2.0, "N": "x"}}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("grid.N"), "{err}");
        let err = RunConfig::from_json_str(r#"{"suite": "nope"}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("suite"), "{err}");
        let err = RunConfig::from_json_str(r#"{"suite": "flow", "colour": 1}"#)
            .unwrap_err()
            .to_string();
        assert!(err.contains("colour"), "{err}");
    }

    #[test]
    fn validation_rejects_bad_fields() {
        let mut c = RunConfig::new(Suite::Modular);
        c.grid = Some(GridSettings {
            half_width: 2.0,
            points: 7,
        });
        assert!(c
            .validate(&[])
            .unwrap_err()
            .to_string()
            .starts_with("invalid input: grid"));
        c.grid = None;
        c.lambdas = Some(vec![0.01, 0.02]);
        assert!(c.validate(&[]).unwrap_err().to_string().contains("decreasing"));
        c.lambdas = Some(vec![0.02, -0.01]);
        assert!(c.validate(&[]).unwrap_err().to_string().contains("lambdas[1]"));
        c.lambdas = None;
        c.tolerances.insert("group_law".into(), 1e-3);
        assert!(c.validate(&["group_law"]).is_ok());
        assert!(c
            .validate(&["other"])
            .unwrap_err()
            .to_string()
            .contains("tolerances.group_law"));
        c.tolerances.clear();
        c.state = Some(PathBuf::from("/nonexistent"));
        assert!(c.validate(&[]).unwrap_err().to_string().contains("state"));
    }
}
