//! Run configuration files.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use supercone_core::dynamics::StateFunction;

use crate::json::{MultivectorJson, SystemSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Either a path to a system spec (relative to the config file) or the spec
/// itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SystemRef {
    Path(PathBuf),
    Inline(SystemSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpec {
    pub phi: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub phibar: f64,
}

impl From<StateSpec> for StateFunction {
    fn from(s: StateSpec) -> Self {
        StateFunction::new(s.phi, [s.phi1, s.phi2], s.phibar)
    }
}

/// Initial condition at `t0`. Exactly one field must be set.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSpec {
    /// Raw coordinate components; normalized with `η(t0)` before evolving.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<StateSpec>,
    /// Hermitean even superfunction on two generators.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multivector: Option<MultivectorJson>,
    /// `(p1, p2, p3, p4)` inside the ellipsoid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probabilities: Option<[f64; 4]>,
    /// Seeded random normalized state.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Initial {
    State(StateFunction),
    Probabilities([f64; 4]),
    Random,
}

impl InitialSpec {
    pub fn resolve(&self) -> Result<Initial, String> {
        let set = [self.state.is_some(), self.multivector.is_some(), self.probabilities.is_some(), self.random == Some(true)];
        if set.iter().filter(|&&b| b).count() != 1 {
            return Err("initial condition needs exactly one of state, multivector, probabilities, random".into());
        }
        if let Some(s) = self.state {
            return Ok(Initial::State(s.into()));
        }
        if let Some(mv) = &self.multivector {
            let f = mv.to_multivector().map_err(|e| e.to_string())?;
            return StateFunction::from_multivector(&f).map(Initial::State).map_err(|e| e.to_string());
        }
        if let Some(p) = self.probabilities {
            return Ok(Initial::Probabilities(p));
        }
        Ok(Initial::Random)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyToggles {
    /// Fail `evolve` if the norm drifts by more than `1e-9`.
    #[serde(default)]
    pub norm: bool,
    /// For constant systems, cross-check every row against the transition
    /// matrix applied to the initial probabilities.
    #[serde(default)]
    pub transition: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Output times for `evolve`, points for `ellipsoid`, draws per check for
    /// `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    /// Points per axis; switches `ellipsoid` from random to grid sampling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
    #[serde(default)]
    pub verify: VerifyToggles,
    /// Superform file for `decompose`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let mut cfg: RunConfig = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn resolve_path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn system_spec(&self) -> Result<SystemSpec, String> {
        match &self.system {
            None => Err("config has no system".into()),
            Some(SystemRef::Inline(s)) => Ok(s.clone()),
            Some(SystemRef::Path(p)) => {
                let path = self.resolve_path(p);
                let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
            }
        }
    }
}
