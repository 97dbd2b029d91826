use super::{Endpoint, RVIndex, RegFunc};
use crate::error::{Error, Result};

pub const DEFAULT_LAMBDAS: [f64; 3] = [2.0, 4.0, 8.0];

const FIT_POINTS: usize = 10;
const MIN_POINTS: usize = 4;
const RAPID_SLOPE: f64 = 50.0;
const RAPID_WINDOW: usize = 5;
const GRID_FLOOR: f64 = 1e-300;

/// `a * 2^(-j/4)` for `j = 0, 1, ...` down to `1e-300`.
///
/// Slowly varying corrections such as `1/ln t` decay only logarithmically, so
/// the grid runs as deep as the floating-point range allows. The quarter-octave
/// spacing leaves enough points before underflow to see rapid variation.
pub fn geometric_grid(a: f64) -> Vec<f64> {
    let step = 2f64.powf(-0.25);
    (0..)
        .map(|j| a * step.powi(j))
        .take_while(|&t| t >= GRID_FLOOR)
        .collect()
}

/// Least-squares estimate of `rho` in `f(lambda t) / f(t) -> lambda^rho` as
/// `t -> 0`, fitted on the deepest usable grid points.
pub fn estimate_rv0_index(f: &RegFunc, lambdas: &[f64], t_grid: &[f64]) -> Result<RVIndex> {
    if f.at != Endpoint::Zero {
        return Err(Error::Parameter("index at zero needs a function at zero".into()));
    }
    if lambdas.iter().any(|&l| !(l > 0.0) || l == 1.0) {
        return Err(Error::Parameter("lambdas must be positive and != 1".into()));
    }
    // per usable grid point: (ln lambda, ln ratio) samples
    let mut points: Vec<Vec<(f64, f64)>> = Vec::new();
    let mut truncated = false;
    'grid: for &t in t_grid {
        let ft = f.eval(t);
        if !(ft.is_finite() && ft > 0.0) {
            truncated = true;
            break;
        }
        let mut samples = Vec::with_capacity(lambdas.len());
        for &l in lambdas {
            let lt = l * t;
            if lt > f.domain_hi || lt <= f.domain_lo {
                continue;
            }
            let flt = f.eval(lt);
            if !(flt.is_finite() && flt > 0.0) {
                truncated = true;
                break 'grid;
            }
            samples.push((l.ln(), (flt / ft).ln()));
        }
        if !samples.is_empty() {
            points.push(samples);
        }
    }
    if points.len() < MIN_POINTS {
        return Err(Error::InsufficientData {
            usable: points.len(),
            needed: MIN_POINTS,
        });
    }

    let slope = |s: &[(f64, f64)]| {
        let sxy: f64 = s.iter().map(|(x, y)| x * y).sum();
        let sxx: f64 = s.iter().map(|(x, _)| x * x).sum();
        sxy / sxx
    };

    let tail = &points[points.len().saturating_sub(RAPID_WINDOW)..];
    let slopes: Vec<f64> = tail.iter().map(|s| slope(s)).collect();
    let escaping = slopes.iter().all(|s| s.abs() > RAPID_SLOPE)
        && slopes.windows(2).all(|w| w[1].abs() > w[0].abs());
    if escaping {
        let sign = slopes[slopes.len() - 1].signum();
        return Ok(RVIndex {
            value: sign * f64::INFINITY,
            confidence: f64::NAN,
            truncated,
        });
    }

    let fit: Vec<(f64, f64)> = points[points.len().saturating_sub(FIT_POINTS)..]
        .iter()
        .flatten()
        .copied()
        .collect();
    let rho = slope(&fit);
    let rms = (fit.iter().map(|(x, y)| (y - rho * x).powi(2)).sum::<f64>() / fit.len() as f64).sqrt();
    Ok(RVIndex {
        value: rho,
        confidence: rms,
        truncated,
    })
}
