use crate::error::{Error, Result};

const INV_E: f64 = 0.367_879_441_171_442_33;

/// `-1/e`, where the two real branches meet.
pub const BRANCH_POINT: f64 = -INV_E;

// a few ulps of slack below -1/e are snapped onto the branch point
const BRANCH_SLACK: f64 = 4.0 * f64::EPSILON * INV_E;

fn check_branch(x: f64) -> Option<f64> {
    if x < BRANCH_POINT && x >= BRANCH_POINT - BRANCH_SLACK {
        Some(-1.0)
    } else if x == BRANCH_POINT {
        Some(-1.0)
    } else {
        None
    }
}

/// Series of either branch around the branch point in powers of
/// `p = ±sqrt(2(e x + 1))`.
fn branch_series(x: f64, sign: f64) -> f64 {
    let q = (x + INV_E).max(0.0);
    let p = sign * (2.0 * std::f64::consts::E * q).sqrt();
    -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
}

/// Halley iteration on `w e^w - x`.
fn halley(x: f64, mut w: f64) -> f64 {
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if f == 0.0 || wp1 == 0.0 {
            break;
        }
        let dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        if !dw.is_finite() {
            break;
        }
        w -= dw;
        if dw.abs() <= 4.0 * f64::EPSILON * (1.0 + w.abs()) {
            break;
        }
    }
    w
}

/// Newton on the logarithmic form `w + ln|w| = ln|x|`, well conditioned for
/// `|w| > 1` and immune to overflow or underflow of `e^w`.
fn log_newton(ln_abs_x: f64, mut w: f64, lower_branch: bool) -> f64 {
    for _ in 0..64 {
        let g = w + (w.abs()).ln() - ln_abs_x;
        let dw = g / (1.0 + 1.0 / w);
        let mut next = w - dw;
        // keep the iterate on its branch
        if lower_branch && next >= -1.0 {
            next = 0.5 * (w - 1.0);
        } else if !lower_branch && next <= 1.0 {
            next = 0.5 * (w + 1.0);
        }
        let step = (next - w).abs();
        w = next;
        if step <= 2.0 * f64::EPSILON * w.abs() {
            break;
        }
    }
    w
}

fn bisect(x: f64, mut lo: f64, mut hi: f64, increasing: bool) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let above = mid * mid.exp() > x;
        if above == increasing {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn accept(x: f64, w: f64) -> bool {
    w.is_finite() && (w * w.exp() - x).abs() <= 1e-12 * x.abs().max(1.0)
}

/// Principal branch `W0` on `[-1/e, inf)`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain {
            what: "lambert_w0 needs x >= -1/e",
            value: x,
        });
    }
    if let Some(w) = check_branch(x) {
        return Ok(w);
    }
    if x < BRANCH_POINT {
        return Err(Error::Domain {
            what: "lambert_w0 needs x >= -1/e",
            value: x,
        });
    }
    if x == 0.0 || x == f64::INFINITY {
        return Ok(x);
    }
    let w = if x > std::f64::consts::E {
        let l1 = x.ln();
        let l2 = l1.ln();
        log_newton(l1, l1 - l2 + l2 / l1, false)
    } else {
        let guess = if x < -0.25 {
            branch_series(x, 1.0)
        } else {
            // rational fit good to a few percent on [-0.25, e]
            x * (1.0 + 4.0 / 3.0 * x) / (1.0 + 7.0 / 3.0 * x + 5.0 / 6.0 * x * x)
        };
        halley(x, guess)
    };
    if accept(x, w) || x > std::f64::consts::E {
        return Ok(w);
    }
    let hi = if x > 0.0 { x.ln_1p().max(1.0) } else { 0.0 };
    Ok(bisect(x, -1.0, hi, true))
}

/// Lower branch `W-1` on `[-1/e, 0)`, with values `<= -1`.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if let Some(w) = check_branch(x) {
        return Ok(w);
    }
    if x.is_nan() || x < BRANCH_POINT || x >= 0.0 {
        return Err(Error::Domain {
            what: "lambert_wm1 needs -1/e <= x < 0",
            value: x,
        });
    }
    let w = if x > -0.25 {
        let l1 = (-x).ln();
        let l2 = (-l1).ln();
        log_newton(l1, l1 - l2 + l2 / l1, true)
    } else {
        halley(x, branch_series(x, -1.0))
    };
    if w <= -1.0 && (accept(x, w) || x > -0.25) {
        return Ok(w);
    }
    Ok(bisect(x, 2.0 * (-x).ln() - 2.0, -1.0, false))
}
