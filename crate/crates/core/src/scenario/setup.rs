use std::sync::Arc;

use super::ScenarioId;
use crate::error::{Error, Result};
use crate::operators::{dr_operator, EpiProfile, FixedPointOperator, Point, SetDescriptor};
use crate::rates::{asymptotic_profile, ProfileCase, RateProfile};
use crate::regvar::{Monotone, RegFunc};
use crate::solver::QuasiCyclicSchedule;

/// Upper end of the domain recorded on the regularity functions; they are
/// defined on all of `[0, inf)`.
const PSI_DOMAIN_HI: f64 = 1e6;

/// Whether the constants inside `psi_B` are derived for the instance (so
/// `dist <= bound` is guaranteed) or only known to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Explicit,
    ExistenceOnly,
}

/// Everything needed to run a scenario and evaluate its theory.
#[derive(Debug, Clone)]
pub struct ScenarioSetup {
    pub id: ScenarioId,
    pub ops: Vec<FixedPointOperator>,
    pub schedule: QuasiCyclicSchedule,
    /// Intersection of the fixed-point sets.
    pub target: SetDescriptor,
    pub psi_b: RegFunc,
    pub alpha: f64,
    pub bound_kind: BoundKind,
    pub profile: RateProfile,
    /// Points of the target used by Fejér audits.
    pub fix_samples: Vec<Point>,
}

fn psi(f: impl Fn(f64) -> f64 + Send + Sync + 'static, index: f64) -> RegFunc {
    RegFunc::at_zero(f, PSI_DOMAIN_HI)
        .with_monotone(Monotone::Nondecreasing)
        .with_index(index)
}

/// Regularity function for AP between the epigraph of an even convex `h`
/// and the horizontal axis, over the ball of radius `r` around the origin.
///
/// If `|mu| <= a` and some `(x', mu')` of the epigraph is within `a` of
/// `(x, mu)`, then `h(x') <= 2a`, so `|x| <= h^-1(2a) + a` and
/// `|(x, mu)| <= h^-1(2a) + 2a`.
fn epigraph_axis_psi(h: EpiProfile, r: f64, index: f64) -> RegFunc {
    psi(
        move |a: f64| {
            if a <= 0.0 {
                0.0
            } else {
                (h.inv(2.0 * a) + 2.0 * a).min(r)
            }
        },
        index,
    )
}

fn origin_samples() -> Vec<Point> {
    vec![Point::zeros(2)]
}

pub fn build_setup(id: ScenarioId, x0: &Point) -> Result<ScenarioSetup> {
    id.validate()?;
    if x0.dim() != id.dim() {
        return Err(Error::Parameter(format!(
            "x0 has dimension {}, {} expects {}",
            x0.dim(),
            id.name(),
            id.dim()
        )));
    }
    let axis = SetDescriptor::x_axis();
    let ap = QuasiCyclicSchedule::ap_schedule();
    let r = x0.norm();
    let setup = match id {
        ScenarioId::HolderLines { theta } => {
            let s = (0.5 * theta).sin();
            ScenarioSetup {
                id,
                ops: vec![
                    FixedPointOperator::projection(SetDescriptor::line(0.0)),
                    FixedPointOperator::projection(SetDescriptor::line(theta)),
                ],
                schedule: ap,
                target: SetDescriptor::origin(2),
                // the sup of |x| with both line distances <= a sits on the
                // bisector: |x| sin(theta / 2) = a
                psi_b: psi(move |a: f64| a.max(0.0) / s, 1.0),
                alpha: 0.5,
                bound_kind: BoundKind::Explicit,
                profile: asymptotic_profile(ProfileCase::Linear {
                    factor: theta.cos(),
                })?,
                fix_samples: origin_samples(),
            }
        }
        ScenarioId::HolderPower { gamma } => {
            // (2a)^gamma + 2a <= (2^gamma + 2 r^(1-gamma)) a^gamma for a <= r,
            // and the right side exceeds r otherwise
            let k = 2f64.powf(gamma) + 2.0 * r.powf(1.0 - gamma);
            ScenarioSetup {
                id,
                ops: vec![
                    FixedPointOperator::projection(SetDescriptor::PowerEpigraph { p: 1.0 / gamma }),
                    FixedPointOperator::projection(axis),
                ],
                schedule: ap,
                target: SetDescriptor::origin(2),
                psi_b: psi(move |a: f64| k * a.max(0.0).powf(gamma), gamma),
                alpha: 0.5,
                bound_kind: BoundKind::Explicit,
                profile: asymptotic_profile(ProfileCase::Holder { gamma })?,
                fix_samples: origin_samples(),
            }
        }
        ScenarioId::HolderEntropicAp => ScenarioSetup {
            id,
            ops: vec![
                FixedPointOperator::projection(SetDescriptor::GammaEpigraph),
                FixedPointOperator::projection(axis),
            ],
            schedule: ap,
            target: SetDescriptor::origin(2),
            psi_b: epigraph_axis_psi(EpiProfile::Gamma, r, 0.5),
            alpha: 0.5,
            bound_kind: BoundKind::Explicit,
            profile: asymptotic_profile(ProfileCase::HolderEntropic)?,
            fix_samples: origin_samples(),
        },
        ScenarioId::Logarithmic { gamma } => ScenarioSetup {
            id,
            ops: vec![
                FixedPointOperator::projection(SetDescriptor::LogEpigraph { gamma }),
                FixedPointOperator::projection(axis),
            ],
            schedule: ap,
            target: SetDescriptor::origin(2),
            psi_b: epigraph_axis_psi(EpiProfile::Log { g: gamma }, r, 0.0),
            alpha: 0.5,
            bound_kind: BoundKind::Explicit,
            profile: asymptotic_profile(ProfileCase::Logarithmic { gamma })?,
            fix_samples: origin_samples(),
        },
        ScenarioId::DrGamma => {
            let pa = FixedPointOperator::projection(axis);
            let pb = FixedPointOperator::projection(SetDescriptor::GammaEpigraph);
            let target = SetDescriptor::DrFixRay;
            let d0 = target.distance_to(x0)?;
            if !(d0 < EpiProfile::Gamma.half_width()) {
                return Err(Error::Parameter(format!(
                    "dr_gamma needs dist(x0, Fix) < {}, got {d0}",
                    EpiProfile::Gamma.half_width()
                )));
            }
            // |x| <= d0 along the run, so the slope of gamma is at most L
            let lip = EpiProfile::Gamma.dh(d0);
            let h = EpiProfile::Gamma;
            ScenarioSetup {
                id,
                ops: vec![dr_operator(&pa, &pb)],
                schedule: QuasiCyclicSchedule::dr_schedule(),
                target,
                psi_b: psi(
                    move |a: f64| {
                        if a <= 0.0 {
                            return 0.0;
                        }
                        (h.inv(a) + a).hypot((1.0 + lip) * a).min(d0)
                    },
                    0.5,
                ),
                alpha: 0.5,
                bound_kind: BoundKind::Explicit,
                profile: asymptotic_profile(ProfileCase::HolderEntropic)?,
                fix_samples: [0.0, 0.1, 0.5, 2.0]
                    .iter()
                    .map(|&mu| Point::from([0.0, mu]))
                    .collect(),
            }
        }
        ScenarioId::ExpconeEntropicAp { kappa } => {
            let target = SetDescriptor::ExpConeFace;
            let d0 = target.distance_to(x0)?;
            let knee = (-1.0f64).exp();
            let plateau = d0.max(kappa * knee);
            // c = exp(1 / (2 sqrt(9 kappa^2 / 2)))
            let c = (1.0 / (2.0 * (4.5 * kappa * kappa).sqrt())).exp();
            ScenarioSetup {
                id,
                ops: vec![
                    FixedPointOperator::projection(SetDescriptor::ExpCone),
                    FixedPointOperator::projection(SetDescriptor::XAxisPlane { coord: 1 }),
                ],
                schedule: ap,
                target,
                psi_b: psi(
                    move |a: f64| {
                        if a <= 0.0 {
                            0.0
                        } else if a <= knee {
                            -kappa * a * a.ln()
                        } else {
                            plateau
                        }
                    },
                    1.0,
                ),
                alpha: 0.5,
                bound_kind: BoundKind::ExistenceOnly,
                profile: asymptotic_profile(ProfileCase::EntropicEnvelope { c })?,
                fix_samples: [[0.0, 0.0, 0.0], [-1.0, 0.0, 1.0], [0.0, 0.0, 2.0], [-2.0, 0.0, 0.0]]
                    .iter()
                    .map(|&p| Point::from(p))
                    .collect(),
            }
        }
    };
    Ok(setup)
}

impl ScenarioSetup {
    /// Scenario label and operator names.
    pub fn describe(&self) -> String {
        let names: Vec<&str> = self.ops.iter().map(|o| o.name.as_str()).collect();
        format!("{} [{}]", self.id.label(), names.join(", "))
    }

    pub fn psi_fn(&self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        self.psi_b.func()
    }
}
