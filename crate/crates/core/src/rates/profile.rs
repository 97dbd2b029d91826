use super::Regime;
use crate::error::{Error, Result};
use crate::numerics::lambert_w0;

/// Catalog of closed-form asymptotic rates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileCase {
    /// `k^(-gamma / (2 (1 - gamma)))`; `gamma = 1` falls back to a linear profile.
    Holder { gamma: f64 },
    /// `factor^k`.
    Linear { factor: f64 },
    /// `W0(sqrt k)^2 / sqrt k`.
    HolderEntropic,
    /// `sqrt(k) c^(-sqrt k)`, a lower envelope of the theoretical bound.
    EntropicEnvelope { c: f64 },
    /// `(1 / ln k)^gamma`.
    Logarithmic { gamma: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateProfile {
    pub name: String,
    pub case: ProfileCase,
    pub regime: Regime,
}

impl RateProfile {
    /// Profile value at iteration `k`; small `k` is clamped to where the
    /// closed form is positive and decreasing.
    pub fn eval(&self, k: f64) -> f64 {
        match self.case {
            ProfileCase::Holder { gamma } => k.max(1.0).powf(-gamma / (2.0 * (1.0 - gamma))),
            ProfileCase::Linear { factor } => factor.powf(k.max(0.0)),
            ProfileCase::HolderEntropic => {
                let r = k.max(1.0).sqrt();
                let w = lambert_w0(r).expect("W0 of a positive argument");
                w * w / r
            }
            ProfileCase::EntropicEnvelope { c } => {
                // decreasing once sqrt(k) > 1 / ln c
                let r = k.sqrt().max(1.0 / c.ln());
                r * c.powf(-r)
            }
            ProfileCase::Logarithmic { gamma } => (1.0 / k.max(std::f64::consts::E).ln()).powf(gamma),
        }
    }
}

/// Linear profile used for `holder(1)`, where no base is implied.
const DEFAULT_LINEAR_FACTOR: f64 = 0.5;

pub fn asymptotic_profile(case: ProfileCase) -> Result<RateProfile> {
    let (name, case, regime) = match case {
        ProfileCase::Holder { gamma } if gamma == 1.0 => (
            "linear".to_string(),
            ProfileCase::Linear {
                factor: DEFAULT_LINEAR_FACTOR,
            },
            Regime::Linear,
        ),
        ProfileCase::Holder { gamma } if gamma > 0.0 && gamma < 1.0 => {
            (format!("holder({gamma})"), case, Regime::Sublinear { rho: gamma })
        }
        ProfileCase::Linear { factor } if factor > 0.0 && factor < 1.0 => {
            (format!("linear({factor})"), case, Regime::Linear)
        }
        ProfileCase::HolderEntropic => (
            "holder_entropic".to_string(),
            case,
            Regime::Sublinear { rho: 0.5 },
        ),
        ProfileCase::EntropicEnvelope { c } if c > 1.0 => (
            format!("entropic_envelope({c})"),
            case,
            Regime::AlmostLinear,
        ),
        ProfileCase::Logarithmic { gamma } if gamma > 0.0 => (
            format!("logarithmic({gamma})"),
            case,
            Regime::SubPolynomial,
        ),
        other => return Err(Error::Parameter(format!("profile parameters out of range: {other:?}"))),
    };
    Ok(RateProfile { name, case, regime })
}
