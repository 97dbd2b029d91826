use super::{Bracket, Tolerance};
use crate::error::{Error, Result};

/// Brent's method for a sign change of `g` on `bracket`, refined to full
/// double precision in `x` (or until `tol.max_iter` steps).
pub fn find_root<G: FnMut(f64) -> f64>(mut g: G, bracket: Bracket, tol: Tolerance) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Bracket {
            target: 0.0,
            lo: a,
            hi: b,
        });
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..tol.max_iter.max(100) {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + f64::MIN_POSITIVE;
        let m = 0.5 * (c - b);
        if m.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol1 * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(m) };
        fb = g(b);
        if !fb.is_finite() {
            return Err(Error::Domain {
                what: "root function not finite",
                value: b,
            });
        }
    }
    Err(Error::Accuracy {
        what: "brent root",
        estimate: b,
        error: (c - b).abs(),
    })
}

/// Solves `f(x) = y` for `f` strictly monotone on `bracket`.
pub fn invert_monotone<F: Fn(f64) -> f64>(
    f: F,
    y: f64,
    bracket: Bracket,
    tol: Tolerance,
) -> Result<f64> {
    let (flo, fhi) = (f(bracket.lo), f(bracket.hi));
    if flo == fhi {
        return Err(Error::Monotonicity {
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    let (fmin, fmax) = (flo.min(fhi), flo.max(fhi));
    let slack = tol.bound(y);
    if !(y >= fmin - slack && y <= fmax + slack) {
        return Err(Error::Bracket {
            target: y,
            lo: bracket.lo,
            hi: bracket.hi,
        });
    }
    if y >= fmax {
        return Ok(if fhi >= flo { bracket.hi } else { bracket.lo });
    }
    if y <= fmin {
        return Ok(if fhi >= flo { bracket.lo } else { bracket.hi });
    }
    let x = find_root(|x| f(x) - y, bracket, tol)?;
    let resid = (f(x) - y).abs();
    if resid > slack {
        return Err(Error::Accuracy {
            what: "monotone inversion",
            estimate: x,
            error: resid,
        });
    }
    Ok(x)
}
