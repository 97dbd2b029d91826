use super::{Monotone, RegFunc};
use crate::error::{Error, Result};

const FLOOR: f64 = 1e-300;
const CEIL: f64 = 1e300;
const ENVELOPE_POINTS: usize = 4096;

/// Geometric midpoint when both ends are positive, arithmetic otherwise.
fn midpoint(a: f64, b: f64) -> f64 {
    if a > 0.0 {
        a * (b / a).sqrt()
    } else {
        0.5 * (a + b)
    }
}

/// Shrinks `[a, b]` with `pred(a) = false`, `pred(b) = true` onto the switch
/// point of a monotone predicate.
fn bisect_switch(mut a: f64, mut b: f64, pred: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..256 {
        let m = midpoint(a, b);
        if m <= a || m >= b {
            break;
        }
        if pred(m) {
            b = m;
        } else {
            a = m;
        }
    }
    (a, b)
}

/// Minus inverse `sup{x in (0, domain_hi] : f(x) < y}` of a function
/// vanishing at zero.
pub fn minus_inverse(f: &RegFunc, y: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain {
            what: "minus inverse needs y > 0",
            value: y,
        });
    }
    let below = |x: f64| f.eval(x) < y;
    let mut hi = f.domain_hi;
    if hi.is_infinite() {
        let mut x = 1.0f64;
        while below(x) {
            if x > CEIL {
                return Ok(f64::INFINITY);
            }
            x *= x.max(2.0);
        }
        hi = x;
    } else if below(hi) {
        return Ok(hi);
    }
    if f.monotone != Monotone::Nondecreasing {
        return Ok(minus_envelope(f, y, hi));
    }
    // walk down with doubling exponents until f drops below y
    let mut upper = hi;
    let mut e = 1.0;
    let lower = loop {
        let x = (hi * 2f64.powf(-e)).max(FLOOR);
        if below(x) {
            break x;
        }
        if x == FLOOR {
            return Ok(0.0);
        }
        upper = x;
        e *= 2.0;
    };
    let (a, _) = bisect_switch(lower, upper, |x| !below(x));
    Ok(a)
}

/// The sup of `{f < y}` equals the sup of `{E < y}` for the suffix minimum
/// `E(x) = min_{t >= x} f(t)`, which is monotone; locate the last grid cell
/// where `f` dips below `y` and bisect inside it.
fn minus_envelope(f: &RegFunc, y: f64, hi: f64) -> f64 {
    let lo = f.domain_lo.max(FLOOR);
    let ratio = (hi / lo).powf(1.0 / (ENVELOPE_POINTS - 1) as f64);
    let grid: Vec<f64> = (0..ENVELOPE_POINTS).map(|i| lo * ratio.powi(i as i32)).collect();
    let Some(i) = (0..grid.len()).rev().find(|&i| f.eval(grid[i]) < y) else {
        return 0.0;
    };
    if i + 1 == grid.len() {
        return hi;
    }
    bisect_switch(grid[i], grid[i + 1], |x| f.eval(x) >= y).0
}

/// Arrow inverse `inf{x >= domain_lo : f(x) > y}` of a function diverging at
/// infinity.
pub fn arrow_inverse(f: &RegFunc, y: f64) -> Result<f64> {
    let lo = f.domain_lo;
    let above = |x: f64| f.eval(x) > y;
    if above(lo) {
        return Ok(lo);
    }
    if f.monotone != Monotone::Nondecreasing {
        return Ok(arrow_envelope(f, y));
    }
    let mut lower = lo;
    let mut x = lo.max(1.0) * 2.0;
    while !above(x) {
        if x > CEIL {
            return Ok(f64::INFINITY);
        }
        lower = x;
        x *= x.max(2.0);
    }
    let (_, b) = bisect_switch(lower, x, above);
    Ok(b)
}

/// First crossing of the prefix maximum on a fine geometric scan.
fn arrow_envelope(f: &RegFunc, y: f64) -> f64 {
    let lo = f.domain_lo;
    let step = 2f64.powf(1.0 / 64.0);
    let mut prev = lo;
    let mut x = lo.max(FLOOR);
    while x <= CEIL {
        if f.eval(x) > y {
            return bisect_switch(prev, x, |t| f.eval(t) > y).1;
        }
        prev = x;
        x *= step;
    }
    f64::INFINITY
}
