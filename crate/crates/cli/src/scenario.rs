//! Scenario files: JSON, angles in degrees.

use std::path::Path;

use anyhow::{bail, Context};
use biqutrit::bench::Convention;
use biqutrit::mub::StateLabel;
use biqutrit::QutritState;
use serde::{Deserialize, Serialize};

/// A state given by table label or by explicit magnitudes and phases.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StateSpec {
    Label(String),
    Explicit {
        magnitudes: [f64; 3],
        phases_deg: [f64; 3],
    },
}

impl StateSpec {
    pub fn resolve(&self) -> anyhow::Result<QutritState<f64>> {
        match self {
            StateSpec::Label(l) => Ok(l.parse::<StateLabel>()?.state()),
            StateSpec::Explicit {
                magnitudes,
                phases_deg,
            } => {
                if magnitudes.iter().any(|m| !m.is_finite() || *m < 0.0) {
                    bail!("magnitudes must be finite and nonnegative");
                }
                Ok(QutritState::from_polar(*magnitudes, phases_deg.map(f64::to_radians))?)
            }
        }
    }

    /// Weights and relative phases (degrees) that prepare this state.
    pub fn preparation(&self) -> anyhow::Result<([f64; 3], [f64; 2])> {
        let psi = self.resolve()?;
        let a = psi.amplitudes();
        let weights = a.map(|c| c.norm());
        let phase = |k: usize| {
            if a[k].norm() == 0.0 || a[0].norm() == 0.0 {
                0.0
            } else {
                (a[k] * a[0].conj()).arg().to_degrees()
            }
        };
        Ok((weights, [phase(1), phase(2)]))
    }

    pub fn name(&self) -> String {
        match self {
            StateSpec::Label(l) => l.parse::<StateLabel>().map(|l| l.to_string()).unwrap_or_else(|_| l.clone()),
            StateSpec::Explicit { .. } => "custom".into(),
        }
    }
}

/// Every input a run depends on. Flags override file values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default)]
    pub state: Option<StateSpec>,
    /// Mean expected counts per protocol row.
    #[serde(default)]
    pub events: Option<f64>,
    /// Rate-to-count factor; takes precedence over `events`.
    #[serde(default)]
    pub exposure: Option<f64>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub background: Option<f64>,
    #[serde(default)]
    pub convention: Option<Convention>,
}

impl Scenario {
    pub fn load(path: &Path) -> anyhow::Result<Scenario> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing scenario {}", path.display()))
    }

    pub fn state(&self, default: &str) -> StateSpec {
        self.state.clone().unwrap_or_else(|| StateSpec::Label(default.into()))
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn background(&self) -> anyhow::Result<f64> {
        let b = self.background.unwrap_or(0.0);
        if !(b >= 0.0 && b.is_finite()) {
            bail!("background must be nonnegative, got {b}");
        }
        Ok(b)
    }

    pub fn events(&self, default: f64) -> anyhow::Result<f64> {
        let e = self.events.unwrap_or(default);
        if !(e > 0.0 && e.is_finite()) {
            bail!("events must be positive, got {e}; exposure must be positive");
        }
        Ok(e)
    }
}
