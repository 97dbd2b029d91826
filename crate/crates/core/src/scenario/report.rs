use serde::{Deserialize, Serialize};

use super::{build_setup, BoundKind, ProfileOverlay, ScenarioConfig, ScenarioSetup};
use crate::error::{Error, Result};
use crate::operators::Point;
use crate::rates::{PhiSpec, RateBoundFn, Regime};
use crate::solver::{
    estimate_empirical_psi, run_with_target, IterationTrace, PsiSampling, StopReason,
};

/// Report rows: every iteration up to here, then roughly geometric.
const ROW_DENSE: u64 = 1000;
const ROW_RATIO: f64 = 1.01;
const MIN_FIT_POINTS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportRow {
    pub k: u64,
    pub dist: Option<f64>,
    pub residual: f64,
    pub bound: Option<f64>,
    pub profile: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitModel {
    /// Slope of `ln dist` against `ln k`.
    LoglogSlope,
    /// Slope of `ln dist` against `k`: the log of the per-step factor.
    LinearFactor,
    /// Median of `dist / profile`.
    ProfileConstant,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fit {
    pub model: FitModel,
    /// Window actually used after shrinking.
    pub window: [u64; 2],
    pub value: f64,
    /// RMS residual of the line for the slope models; `max / min` of the
    /// ratios for the profile constant.
    pub spread: f64,
    pub points: usize,
}

/// Fits `model` to the rows with `k` in `window`. The window is cut before
/// the first row whose distance (or profile) is not positive.
pub fn fit_rate(rows: &[ReportRow], model: FitModel, window: [u64; 2]) -> Result<Fit> {
    let mut pts: Vec<(f64, f64, f64)> = Vec::new();
    for row in rows.iter().filter(|r| r.k >= window[0] && r.k <= window[1]) {
        let d = row.dist.unwrap_or(f64::NAN);
        let p = match model {
            FitModel::ProfileConstant => row.profile.unwrap_or(f64::NAN),
            _ => 1.0,
        };
        if !(d > 0.0 && d.is_finite() && p > 0.0 && p.is_finite()) {
            break;
        }
        pts.push((row.k as f64, d, p));
    }
    if pts.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            usable: pts.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let used = [pts[0].0 as u64, pts[pts.len() - 1].0 as u64];
    let (value, spread) = match model {
        FitModel::LoglogSlope => {
            let xy: Vec<(f64, f64)> = pts.iter().map(|&(k, d, _)| (k.ln(), d.ln())).collect();
            let (slope, _, rms) = least_squares(&xy);
            (slope, rms)
        }
        FitModel::LinearFactor => {
            let xy: Vec<(f64, f64)> = pts.iter().map(|&(k, d, _)| (k, d.ln())).collect();
            let (slope, _, rms) = least_squares(&xy);
            (slope, rms)
        }
        FitModel::ProfileConstant => {
            let mut ratios: Vec<f64> = pts.iter().map(|&(_, d, p)| d / p).collect();
            ratios.sort_by(f64::total_cmp);
            let n = ratios.len();
            let median = if n % 2 == 1 {
                ratios[n / 2]
            } else {
                0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
            };
            (median, ratios[n - 1] / ratios[0])
        }
    };
    Ok(Fit {
        model,
        window: used,
        value,
        spread,
        points: pts.len(),
    })
}

/// `(slope, intercept, rms residual)`.
fn least_squares(xy: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = xy.len() as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / n;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let icept = my - slope * mx;
    let rss: f64 = xy.iter().map(|p| (p.1 - icept - slope * p.0).powi(2)).sum();
    (slope, icept, (rss / n).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub scenario: String,
    pub rows: Vec<ReportRow>,
    pub fits: Vec<Fit>,
    pub regime: Regime,
    pub bound_kind: BoundKind,
    /// First reported `k` whose bound underflowed; from there on the bound
    /// column continues the asymptotic profile.
    pub crossover_k: Option<u64>,
    pub stop: StopReason,
    pub d0: f64,
    /// `(a, psi_hat(a))` when requested.
    pub empirical_psi: Option<Vec<(f64, Option<f64>)>>,
}

impl RateReport {
    pub fn fit(&self, model: FitModel) -> Option<&Fit> {
        self.fits.iter().find(|f| f.model == model)
    }
}

/// A finished run with the pieces the report was computed from.
#[derive(Debug, Clone)]
pub struct ScenarioRun {
    pub setup: ScenarioSetup,
    pub trace: IterationTrace,
    pub report: RateReport,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<RateReport> {
    Ok(run_scenario_full(cfg)?.report)
}

pub fn run_scenario_full(cfg: &ScenarioConfig) -> Result<ScenarioRun> {
    let id = cfg.validate()?;
    let x0 = Point::new(cfg.x0(&id));
    let stop = cfg.stop(&id);
    let setup = build_setup(id, &x0)?;
    let trace = run_with_target(&setup.ops, &setup.schedule, &x0, &stop, Some(&setup.target))?;
    let d0 = setup.target.distance_to(&x0)?;
    let with_profile = cfg.report.profile == ProfileOverlay::Auto;

    let mut rows = Vec::new();
    let mut next_k = 0.0;
    let n = trace.records.len();
    for (i, rec) in trace.records.iter().enumerate() {
        let k = rec.k;
        if k <= ROW_DENSE || k as f64 >= next_k || i + 1 == n {
            if k > ROW_DENSE {
                next_k = (k as f64 * ROW_RATIO).ceil();
            }
            rows.push(ReportRow {
                k,
                dist: rec.dist,
                residual: rec.residual,
                bound: None,
                profile: with_profile.then(|| setup.profile.eval(k as f64)),
            });
        }
    }
    let crossover_k = fill_bounds(&setup, d0, &mut rows)?;

    let last_k = rows.last().map_or(0, |r| r.k);
    let window = cfg.report.fit_window.unwrap_or([10, last_k.max(11)]);
    let mut fits = Vec::new();
    for model in [FitModel::LoglogSlope, FitModel::LinearFactor, FitModel::ProfileConstant] {
        if let Ok(f) = fit_rate(&rows, model, window) {
            fits.push(f);
        }
    }

    let empirical_psi = match &cfg.report.empirical_psi {
        None => None,
        Some(opts) => {
            let levels = opts.levels;
            let ratio = (opts.a_max / opts.a_min).ln() / (levels - 1) as f64;
            let a_grid: Vec<f64> = (0..levels)
                .map(|j| opts.a_min * (ratio * j as f64).exp())
                .collect();
            let sampling = PsiSampling {
                dim: id.dim(),
                r: x0.norm(),
                a_grid,
                samples_per_a: opts.samples,
                seed: cfg.seed,
            };
            let est = estimate_empirical_psi(&setup.ops, &setup.target, &sampling)?;
            Some(est.a.into_iter().zip(est.value).collect())
        }
    };

    let report = RateReport {
        scenario: id.label(),
        rows,
        fits,
        regime: setup.profile.regime,
        bound_kind: setup.bound_kind,
        crossover_k,
        stop: trace.stop.clone(),
        d0,
        empirical_psi,
    };
    Ok(ScenarioRun {
        setup,
        trace,
        report,
    })
}

/// Fills the bound column; returns the crossover `k`, if any.
fn fill_bounds(setup: &ScenarioSetup, d0: f64, rows: &mut [ReportRow]) -> Result<Option<u64>> {
    if d0 == 0.0 {
        for row in rows.iter_mut() {
            row.bound = Some(0.0);
        }
        return Ok(None);
    }
    let d0_sq = d0 * d0;
    let spec = PhiSpec::new(
        setup.psi_b.clone(),
        setup.alpha,
        setup.schedule.nu,
        setup.schedule.s,
        2.0 * d0_sq,
    );
    let rb = RateBoundFn::new(&spec, d0_sq)?;
    let s = setup.schedule.s;
    let mut cache: Option<(u64, f64)> = None;
    let mut last_ok: Option<(u64, f64)> = None;
    let mut crossover = None;
    for row in rows.iter_mut() {
        if crossover.is_none() {
            let m = row.k / s;
            let v = match cache {
                Some((cm, v)) if cm == m => Ok(v),
                _ => rb.bound(row.k),
            };
            match v {
                Ok(v) => {
                    cache = Some((m, v));
                    // dist is nonincreasing, so an earlier bound stays valid
                    let v = last_ok.map_or(v, |(_, b)| v.min(b));
                    row.bound = Some(v);
                    last_ok = Some((row.k, v));
                    continue;
                }
                Err(Error::Underflow { .. }) => crossover = Some(row.k),
                Err(e) => return Err(e),
            }
        }
        row.bound = match (last_ok, row.profile) {
            (Some((k0, b0)), Some(p)) => Some(b0 * p / setup.profile.eval(k0 as f64)),
            _ => None,
        };
    }
    Ok(crossover)
}
