use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::solver::StopCriteria;

/// The scenario catalog.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScenarioId {
    /// AP between two lines through the origin at angle `theta`.
    HolderLines { theta: f64 },
    /// AP between the epigraph of `|x|^(1/gamma)` and the horizontal axis.
    HolderPower { gamma: f64 },
    /// AP between the epigraph of `gamma` and the horizontal axis.
    HolderEntropicAp,
    /// AP between the exponential cone and `{x2 = 0}`; `kappa` is the
    /// (unknown) entropic constant used for the theory column.
    ExpconeEntropicAp { kappa: f64 },
    /// Douglas-Rachford on the horizontal axis and the epigraph of `gamma`.
    DrGamma,
    /// AP between the epigraph of `exp(-|x|^(-1/gamma))` and the axis.
    Logarithmic { gamma: f64 },
}

impl ScenarioId {
    pub const NAMES: [&'static str; 6] = [
        "holder_lines",
        "holder_power",
        "holder_entropic_ap",
        "expcone_entropic_ap",
        "dr_gamma",
        "logarithmic",
    ];

    /// Builds an id from its name and parameters, filling defaults.
    pub fn from_parts(name: &str, params: &BTreeMap<String, f64>) -> Result<Self> {
        let allowed: &[&str] = match name {
            "holder_lines" => &["theta"],
            "holder_power" | "logarithmic" => &["gamma"],
            "expcone_entropic_ap" => &["kappa"],
            "holder_entropic_ap" | "dr_gamma" => &[],
            _ => {
                return Err(Error::Parameter(format!(
                    "unknown scenario '{name}' (expected one of {})",
                    Self::NAMES.join(", ")
                )))
            }
        };
        if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
            return Err(Error::Parameter(format!(
                "scenario '{name}' has no parameter '{k}'"
            )));
        }
        let get = |k: &str, d: f64| params.get(k).copied().unwrap_or(d);
        let id = match name {
            "holder_lines" => ScenarioId::HolderLines {
                theta: get("theta", FRAC_PI_4),
            },
            "holder_power" => ScenarioId::HolderPower {
                gamma: get("gamma", 0.5),
            },
            "holder_entropic_ap" => ScenarioId::HolderEntropicAp,
            "expcone_entropic_ap" => ScenarioId::ExpconeEntropicAp {
                kappa: get("kappa", 1.0),
            },
            "dr_gamma" => ScenarioId::DrGamma,
            _ => ScenarioId::Logarithmic {
                gamma: get("gamma", 1.0),
            },
        };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Parameter(m));
        match *self {
            ScenarioId::HolderLines { theta } if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) => {
                bad(format!("theta = {theta} not in (0, pi/2)"))
            }
            ScenarioId::HolderPower { gamma } if !(gamma > 0.0 && gamma <= 1.0) => {
                bad(format!("gamma = {gamma} not in (0, 1]"))
            }
            ScenarioId::Logarithmic { gamma } if !(gamma > 0.0 && gamma <= 1.0) => {
                bad(format!("gamma = {gamma} not in (0, 1]"))
            }
            ScenarioId::ExpconeEntropicAp { kappa } if !(kappa > 0.0 && kappa.is_finite()) => {
                bad(format!("kappa = {kappa} must be positive"))
            }
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioId::HolderLines { .. } => "holder_lines",
            ScenarioId::HolderPower { .. } => "holder_power",
            ScenarioId::HolderEntropicAp => "holder_entropic_ap",
            ScenarioId::ExpconeEntropicAp { .. } => "expcone_entropic_ap",
            ScenarioId::DrGamma => "dr_gamma",
            ScenarioId::Logarithmic { .. } => "logarithmic",
        }
    }

    pub fn label(&self) -> String {
        match *self {
            ScenarioId::HolderLines { theta } => format!("holder_lines({theta})"),
            ScenarioId::HolderPower { gamma } => format!("holder_power({gamma})"),
            ScenarioId::ExpconeEntropicAp { kappa } => format!("expcone_entropic_ap({kappa})"),
            ScenarioId::Logarithmic { gamma } => format!("logarithmic({gamma})"),
            _ => self.name().to_string(),
        }
    }

    pub fn default_x0(&self) -> Vec<f64> {
        match self {
            ScenarioId::HolderLines { .. } => vec![1.0, 0.0],
            ScenarioId::ExpconeEntropicAp { .. } => vec![0.5, 0.5, 0.5],
            _ => vec![0.3, 0.2],
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            ScenarioId::ExpconeEntropicAp { .. } => 3,
            _ => 2,
        }
    }

    pub fn default_stop(&self) -> StopCriteria {
        let max_iter = match self {
            ScenarioId::HolderLines { .. } => 400,
            ScenarioId::ExpconeEntropicAp { .. } => 10_000,
            _ => 100_000,
        };
        StopCriteria {
            max_iter,
            ..StopCriteria::default()
        }
    }
}

/// Whether the report carries the asymptotic profile column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileOverlay {
    #[default]
    Auto,
    None,
}

/// Sampling of the empirical regularity function on a log grid of levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmpiricalOptions {
    pub a_min: f64,
    pub a_max: f64,
    #[serde(default = "default_levels")]
    pub levels: usize,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_levels() -> usize {
    9
}

fn default_samples() -> usize {
    2000
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportOptions {
    /// Iteration window `[lo, hi]` for the fits; defaults to
    /// `[10, last iteration]`.
    pub fit_window: Option<[u64; 2]>,
    pub profile: ProfileOverlay,
    pub empirical_psi: Option<EmpiricalOptions>,
}

/// A scenario run as read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    #[serde(default)]
    pub x0: Option<Vec<f64>>,
    #[serde(default)]
    pub stop: Option<StopCriteria>,
    #[serde(default)]
    pub report: ReportOptions,
    #[serde(default)]
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn new(scenario: impl Into<String>) -> Self {
        Self {
            scenario: scenario.into(),
            params: BTreeMap::new(),
            x0: None,
            stop: None,
            report: ReportOptions::default(),
            seed: 0,
        }
    }

    pub fn with_param(mut self, key: &str, value: f64) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    pub fn id(&self) -> Result<ScenarioId> {
        ScenarioId::from_parts(&self.scenario, &self.params)
    }

    pub fn x0(&self, id: &ScenarioId) -> Vec<f64> {
        self.x0.clone().unwrap_or_else(|| id.default_x0())
    }

    pub fn stop(&self, id: &ScenarioId) -> StopCriteria {
        self.stop.unwrap_or_else(|| id.default_stop())
    }

    /// Checks everything that does not need the operators.
    pub fn validate(&self) -> Result<ScenarioId> {
        let id = self.id()?;
        let x0 = self.x0(&id);
        if x0.len() != id.dim() {
            return Err(Error::Parameter(format!(
                "x0 has {} coordinates, {} expects {}",
                x0.len(),
                id.name(),
                id.dim()
            )));
        }
        if x0.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parameter("x0 must be finite".into()));
        }
        let stop = self.stop(&id);
        if stop.max_iter == 0 {
            return Err(Error::Parameter("max_iter must be positive".into()));
        }
        if let Some([lo, hi]) = self.report.fit_window {
            if !(lo >= 1 && lo < hi && hi <= stop.max_iter) {
                return Err(Error::Parameter(format!(
                    "fit window [{lo}, {hi}] not within [1, {}]",
                    stop.max_iter
                )));
            }
        }
        if let Some(e) = &self.report.empirical_psi {
            if !(e.a_min > 0.0 && e.a_min < e.a_max) || e.levels < 2 || e.samples == 0 {
                return Err(Error::Parameter("bad empirical_psi options".into()));
            }
        }
        Ok(id)
    }
}
