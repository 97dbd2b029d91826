use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::QuasiCyclicSchedule;
use crate::error::{Error, Result};
use crate::operators::{FixedPointOperator, Point, SetDescriptor};

/// Every iterate below this index is stored; later ones only at
/// checkpoints `floor(1.05^j)`.
const DENSE_RECORDS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct StopCriteria {
    pub max_iter: u64,
    pub residual_tol: f64,
    /// Only used when an exact distance to the intersection is available.
    pub dist_tol: Option<f64>,
}

impl Default for StopCriteria {
    fn default() -> Self {
        Self {
            max_iter: 1_000_000,
            residual_tol: 1e-12,
            dist_tol: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum StopReason {
    MaxIter,
    Residual,
    Distance,
    NumericFailure(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterRecord {
    pub k: u64,
    pub point: Point,
    pub residual: f64,
    pub dist: Option<f64>,
    /// Seconds since the start of the run.
    pub wallclock: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<IterRecord>,
    pub m: usize,
    pub nu: f64,
    pub s: u64,
    pub stop: StopReason,
}

impl IterationTrace {
    pub fn last(&self) -> Option<&IterRecord> {
        self.records.last()
    }

    pub fn ks(&self) -> Vec<u64> {
        self.records.iter().map(|r| r.k).collect()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual).collect()
    }

    pub fn dists(&self) -> Option<Vec<f64>> {
        self.records.iter().map(|r| r.dist).collect()
    }

    pub fn failed(&self) -> bool {
        matches!(self.stop, StopReason::NumericFailure(_))
    }
}

/// Runs the iteration, measuring distances to the common fixed-point set
/// when every operator carries the same fixed set and it has a closed-form
/// distance.
pub fn run(
    ops: &[FixedPointOperator],
    schedule: &QuasiCyclicSchedule,
    x0: &Point,
    stop: &StopCriteria,
) -> Result<IterationTrace> {
    let shared = ops.first().and_then(|o| o.fix_set.clone()).filter(|f| {
        f.has_exact_distance() && ops.iter().all(|o| o.fix_set.as_ref() == Some(f))
    });
    run_with_target(ops, schedule, x0, stop, shared.as_ref())
}

/// `x^{k+1} = sum_i w_i^k T_i(x^k)`, with `target` the intersection of the
/// fixed-point sets used for the `dist` column.
pub fn run_with_target(
    ops: &[FixedPointOperator],
    schedule: &QuasiCyclicSchedule,
    x0: &Point,
    stop: &StopCriteria,
    target: Option<&SetDescriptor>,
) -> Result<IterationTrace> {
    if ops.len() != schedule.m() {
        return Err(Error::Parameter(format!(
            "{} operators but schedule has m = {}",
            ops.len(),
            schedule.m()
        )));
    }
    if !(schedule.nu > 0.0) || schedule.s == 0 {
        return Err(Error::Parameter("schedule needs nu > 0 and s >= 1".into()));
    }
    if !x0.is_finite() {
        return Err(Error::Domain {
            what: "starting point not finite",
            value: f64::NAN,
        });
    }
    let target = match target {
        Some(t) if t.has_exact_distance() => Some(t),
        Some(t) => {
            return Err(Error::Unsupported(format!(
                "no closed-form distance to {t:?}"
            )))
        }
        None => None,
    };

    let start = Instant::now();
    let mut records = Vec::new();
    let mut checkpoint_j = ((DENSE_RECORDS as f64).ln() / 1.05f64.ln()).ceil();
    let mut next_checkpoint = 1.05f64.powf(checkpoint_j).floor() as u64;
    let mut x = x0.clone();
    let mut k: u64 = 0;
    let stop_reason = loop {
        let images: Result<Vec<Point>> = ops.iter().map(|op| op.apply(&x)).collect();
        let images = match images {
            Ok(v) => v,
            Err(e) => break StopReason::NumericFailure(format!("operator failed at k = {k}: {e}")),
        };
        let residual = images.iter().map(|y| x.dist(y)).fold(0.0, f64::max);
        let dist = match target {
            Some(t) => match t.distance_to(&x) {
                Ok(d) => Some(d),
                Err(e) => break StopReason::NumericFailure(format!("distance failed: {e}")),
            },
            None => None,
        };
        if !residual.is_finite() || images.iter().any(|y| !y.is_finite()) {
            break StopReason::NumericFailure(format!("non-finite value at k = {k}"));
        }
        let reason = if residual <= stop.residual_tol {
            Some(StopReason::Residual)
        } else if matches!((dist, stop.dist_tol), (Some(d), Some(t)) if d <= t) {
            Some(StopReason::Distance)
        } else if k >= stop.max_iter {
            Some(StopReason::MaxIter)
        } else {
            None
        };
        let keep = k < DENSE_RECORDS || k == next_checkpoint || reason.is_some();
        if keep {
            records.push(IterRecord {
                k,
                point: x.clone(),
                residual,
                dist,
                wallclock: start.elapsed().as_secs_f64(),
            });
        }
        while next_checkpoint <= k {
            checkpoint_j += 1.0;
            next_checkpoint = 1.05f64.powf(checkpoint_j).floor() as u64;
        }
        if let Some(r) = reason {
            break r;
        }

        let w = schedule.weights_at(k);
        x = if let Some(i) = w.iter().position(|&wi| wi == 1.0) {
            images[i].clone()
        } else {
            let mut acc = Point::zeros(x.dim());
            for (img, &wi) in images.iter().zip(&w) {
                if wi > 0.0 {
                    acc = acc.axpy(wi, img);
                }
            }
            acc
        };
        k += 1;
        if !x.is_finite() {
            break StopReason::NumericFailure(format!("iterate {k} is not finite"));
        }
    };

    Ok(IterationTrace {
        records,
        m: ops.len(),
        nu: schedule.nu,
        s: schedule.s,
        stop: stop_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn identity_never_moves() {
        let ops = vec![FixedPointOperator::identity(); 2];
        let stop = StopCriteria {
            max_iter: 50,
            residual_tol: -1.0,
            dist_tol: None,
        };
        let x0 = Point::from([0.3, -1.0]);
        let t = run(&ops, &QuasiCyclicSchedule::ap_schedule(), &x0, &stop).unwrap();
        assert_eq!(t.records.len(), 51);
        assert!(t.records.iter().all(|r| r.point == x0 && r.residual == 0.0));
        assert_eq!(t.stop, StopReason::MaxIter);
    }

    #[test]
    fn identity_stops_on_zero_residual() {
        let ops = vec![FixedPointOperator::identity()];
        let t = run(
            &ops,
            &QuasiCyclicSchedule::dr_schedule(),
            &Point::from([1.0]),
            &StopCriteria::default(),
        )
        .unwrap();
        assert_eq!(t.stop, StopReason::Residual);
        assert_eq!(t.records.len(), 1);
    }

    #[test]
    fn lines_halve_per_cycle() {
        let ops = vec![
            FixedPointOperator::projection(SetDescriptor::line(0.0)),
            FixedPointOperator::projection(SetDescriptor::line(FRAC_PI_4)),
        ];
        let stop = StopCriteria {
            max_iter: 40,
            residual_tol: 0.0,
            dist_tol: None,
        };
        let t = run_with_target(
            &ops,
            &QuasiCyclicSchedule::ap_schedule(),
            &Point::from([1.0, 0.0]),
            &stop,
            Some(&SetDescriptor::origin(2)),
        )
        .unwrap();
        let d = t.dists().unwrap();
        for k in (2..40).step_by(2) {
            assert!((d[k] / d[k - 2] - 0.5).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn nan_stops_with_partial_trace() {
        let bad = FixedPointOperator::new("bad", 0.5, |p: &Point| {
            Ok(if p[0] < 0.25 { Point::from([f64::NAN]) } else { p * 0.5 })
        });
        let t = run(
            &[bad],
            &QuasiCyclicSchedule::dr_schedule(),
            &Point::from([1.0]),
            &StopCriteria::default(),
        )
        .unwrap();
        assert!(t.failed());
        assert_eq!(t.records.len(), 3);
    }

    #[test]
    fn thinned_after_dense_prefix() {
        let ops = vec![FixedPointOperator::new("shrink", 0.5, |p: &Point| Ok(p * (1.0 - 1e-7)))];
        let stop = StopCriteria {
            max_iter: 150_000,
            residual_tol: 0.0,
            dist_tol: None,
        };
        let t = run(&ops, &QuasiCyclicSchedule::dr_schedule(), &Point::from([1.0]), &stop).unwrap();
        let ks = t.ks();
        assert_eq!(ks[99_999], 99_999);
        let tail: Vec<u64> = ks[100_000..].to_vec();
        assert!(tail.len() < 20, "{}", tail.len());
        assert_eq!(*tail.last().unwrap(), 150_000);
        for w in tail.windows(2) {
            assert!(w[1] > w[0]);
        }
    }
}
