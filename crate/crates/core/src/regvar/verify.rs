use super::{Endpoint, RVIndex, RegFunc};
use crate::error::{Error, Result};
use crate::numerics::{integrate, Bracket, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotterViolation {
    pub x: f64,
    pub y: f64,
    pub ratio: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PotterReport {
    /// Grid threshold beyond which (toward the endpoint) every pair passes;
    /// `None` when violations reach the last threshold.
    pub threshold: Option<f64>,
    pub violations: Vec<PotterViolation>,
    pub pairs_checked: usize,
}

impl PotterReport {
    pub fn holds_everywhere(&self) -> bool {
        self.violations.is_empty()
    }
}

/// All ordered pairs `(x, y)`, `x != y`, of an `n`-point geometric grid on
/// `[lo, hi]`.
pub fn potter_grid(lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
    let ratio = (hi / lo).powf(1.0 / (n.max(2) - 1) as f64);
    let pts: Vec<f64> = (0..n).map(|i| lo * ratio.powi(i as i32)).collect();
    let mut pairs = Vec::with_capacity(n * (n - 1));
    for (i, &x) in pts.iter().enumerate() {
        for (j, &y) in pts.iter().enumerate() {
            if i != j {
                pairs.push((x, y));
            }
        }
    }
    pairs
}

/// Scans `f(x)/f(y) <= A max((x/y)^(rho-eps), (x/y)^(rho+eps))` over `grid`.
pub fn check_potter(f: &RegFunc, rho: f64, a: f64, eps: f64, grid: &[(f64, f64)]) -> PotterReport {
    let toward_infinity = f.at == Endpoint::Infinity;
    // position of a pair along the approach to the endpoint
    let key = |x: f64, y: f64| if toward_infinity { x.min(y) } else { x.max(y) };
    let deeper = |k: f64, than: f64| if toward_infinity { k > than } else { k < than };

    let mut violations = Vec::new();
    for &(x, y) in grid {
        let ratio = f.eval(x) / f.eval(y);
        let r = x / y;
        let bound = a * r.powf(rho - eps).max(r.powf(rho + eps));
        if !(ratio <= bound * (1.0 + 1e-12)) {
            violations.push(PotterViolation { x, y, ratio, bound });
        }
    }
    let keys = grid.iter().map(|&(x, y)| key(x, y));
    let threshold = match violations
        .iter()
        .map(|v| key(v.x, v.y))
        .reduce(|m, k| if deeper(k, m) { k } else { m })
    {
        None => keys.reduce(|m, k| if deeper(m, k) { k } else { m }),
        Some(worst) => keys
            .filter(|&k| deeper(k, worst))
            .reduce(|m, k| if deeper(m, k) { k } else { m }),
    };
    PotterReport {
        threshold,
        violations,
        pairs_checked: grid.len(),
    }
}

/// `x^(sigma+1) f(x) / int_{lo}^{x} t^sigma f(t) dt`, which tends to
/// `sigma + 1 + rho` for `f` regularly varying at infinity with index `rho`.
pub fn karamata_ratio(f: &RegFunc, sigma: f64, x: f64) -> Result<f64> {
    let lo = f.domain_lo;
    if !(x > lo) {
        return Err(Error::Domain {
            what: "karamata ratio needs x > domain_lo",
            value: x,
        });
    }
    let tol = Tolerance::new(0.0, 1e-12, 2000)?;
    // integrate in ln t where possible: the integrand then varies gently
    let log_part = |a: f64, b: f64| -> Result<f64> {
        integrate(
            |l: f64| {
                let t = l.exp();
                t.powf(sigma + 1.0) * f.eval(t)
            },
            Bracket::new(a.ln(), b.ln())?,
            tol,
        )
    };
    let integral = if lo > 0.0 {
        log_part(lo, x)?
    } else {
        let head_end = x.min(1.0);
        let head = integrate(|t: f64| t.powf(sigma) * f.eval(t), Bracket::new(0.0, head_end)?, tol)?;
        head + if x > 1.0 { log_part(1.0, x)? } else { 0.0 }
    };
    Ok(x.powf(sigma + 1.0) * f.eval(x) / integral)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CalculusOp {
    Product,
    Sum,
    Power,
    Compose,
}

/// Index rules at zero: products add, sums take the minimum, powers scale and
/// compositions multiply.
pub fn index_calculus(op: CalculusOp, rho1: RVIndex, rho2: RVIndex, alpha: f64) -> Result<RVIndex> {
    let (a, b) = (rho1.value, rho2.value);
    let value = match op {
        CalculusOp::Product => a + b,
        CalculusOp::Sum => a.min(b),
        CalculusOp::Power => alpha * a,
        CalculusOp::Compose => a * b,
    };
    if value.is_nan() || a.is_nan() || (op != CalculusOp::Power && b.is_nan()) {
        return Err(Error::Indeterminate(format!("{op:?} of {a} and {b} (alpha {alpha})")));
    }
    Ok(RVIndex {
        value,
        confidence: rho1.confidence.max(if op == CalculusOp::Power { 0.0 } else { rho2.confidence }),
        truncated: rho1.truncated || rho2.truncated,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Trend {
    Converges,
    Diverges,
    Vanishes,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticEquiv {
    pub mu_hat: f64,
    pub residual: f64,
    pub trend: Trend,
}

const TAIL: usize = 10;
const TREND_SLOPE: f64 = 0.05;

/// Estimates `mu = lim f/g` along `grid` (ordered toward the endpoint).
///
/// The tail ratios are extrapolated linearly in `1/ln t`, which removes the
/// leading slowly varying correction.
pub fn check_asymptotic_equiv(f: &RegFunc, g: &RegFunc, grid: &[f64]) -> Result<AsymptoticEquiv> {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|&t| {
            let (a, b) = (f.eval(t), g.eval(t));
            (a.is_finite() && b.is_finite() && a > 0.0 && b > 0.0).then(|| (t, a / b))
        })
        .collect();
    let tail = &pts[pts.len().saturating_sub(TAIL)..];
    if tail.len() < 3 {
        return Err(Error::InsufficientData {
            usable: tail.len(),
            needed: 3,
        });
    }
    let (t0, r0) = tail[0];
    let (t1, r1) = tail[tail.len() - 1];
    let slope = (r1.ln() - r0.ln()) / (t1.ln() - t0.ln()).abs();
    if slope > TREND_SLOPE || slope < -TREND_SLOPE {
        let diverges = slope > 0.0;
        return Ok(AsymptoticEquiv {
            mu_hat: if diverges { f64::INFINITY } else { 0.0 },
            residual: f64::INFINITY,
            trend: if diverges { Trend::Diverges } else { Trend::Vanishes },
        });
    }
    let n = tail.len() as f64;
    let us: Vec<f64> = tail.iter().map(|(t, _)| 1.0 / t.ln()).collect();
    let mu_u = us.iter().sum::<f64>() / n;
    let mu_r = tail.iter().map(|(_, r)| r).sum::<f64>() / n;
    let suu: f64 = us.iter().map(|u| (u - mu_u).powi(2)).sum();
    let sur: f64 = us.iter().zip(tail).map(|(u, (_, r))| (u - mu_u) * (r - mu_r)).sum();
    let beta = if suu > 0.0 { sur / suu } else { 0.0 };
    let mu_hat = mu_r - beta * mu_u;
    let residual = tail
        .iter()
        .map(|(_, r)| (r / mu_hat - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticEquiv {
        mu_hat,
        residual,
        trend: Trend::Converges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potter_exact_power() {
        let f = RegFunc::at_infinity(|x: f64| x, 1.0);
        let rep = check_potter(&f, 1.0, 1.1, 0.1, &potter_grid(1.0, 1e6, 30));
        assert!(rep.holds_everywhere());
        assert_eq!(rep.threshold, Some(1.0));
    }

    #[test]
    fn potter_wrong_index_fails_everywhere() {
        let f = RegFunc::at_infinity(|x: f64| x.powf(1.5), 1.0);
        let rep = check_potter(&f, 1.0, 1.1, 0.1, &potter_grid(1.0, 1e6, 30));
        assert!(rep.threshold.is_none());
    }

    #[test]
    fn calculus_rules() {
        let r = |v: f64| RVIndex::exact(v);
        let sum = index_calculus(CalculusOp::Sum, r(0.5), r(1.0), 0.0).unwrap();
        assert_eq!(sum.value, 0.5);
        let comp = index_calculus(CalculusOp::Compose, r(0.5), r(2.0), 0.0).unwrap();
        assert_eq!(comp.value, 1.0);
        let pow = index_calculus(CalculusOp::Power, r(1.0), r(0.0), 2.0).unwrap();
        assert_eq!(pow.value, 2.0);
        assert!(index_calculus(CalculusOp::Product, r(f64::INFINITY), r(f64::NEG_INFINITY), 0.0).is_err());
        assert!(index_calculus(CalculusOp::Compose, r(0.0), r(f64::INFINITY), 0.0).is_err());
    }

    #[test]
    fn equivalence_constant_ratio() {
        let f = RegFunc::at_zero(|t: f64| 2.0 * t, 1.0);
        let g = RegFunc::at_zero(|t: f64| t, 1.0);
        let grid = crate::regvar::geometric_grid(1.0);
        let eq = check_asymptotic_equiv(&f, &g, &grid).unwrap();
        assert!((eq.mu_hat - 2.0).abs() < 1e-12);
        assert!(eq.residual < 1e-12);
    }

    #[test]
    fn equivalence_divergent() {
        let f = RegFunc::at_zero(|t: f64| t, 1.0);
        let g = RegFunc::at_zero(|t: f64| t * t, 1.0);
        let grid = crate::regvar::geometric_grid(1.0);
        let eq = check_asymptotic_equiv(&f, &g, &grid).unwrap();
        assert_eq!(eq.trend, Trend::Diverges);
        assert_eq!(eq.mu_hat, f64::INFINITY);
    }
}
