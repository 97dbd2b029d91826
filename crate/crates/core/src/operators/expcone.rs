//! The exponential cone
//! `K = cl{x : x2 > 0, x3 >= x2 exp(x1 / x2)}`
//! and its polar `{x1 > 0, -e x3 >= x1 exp(x2 / x1)} u {x1 = 0, x2 <= 0, x3 <= 0}`.

use crate::error::Result;
use crate::numerics::{find_root, Bracket, Tolerance};

/// Membership in `K` up to a relative slack `tol`.
pub fn in_exp_cone(p: [f64; 3], tol: f64) -> bool {
    let [x1, x2, x3] = p;
    let scale = tol * (x1.abs() + x2.abs() + x3.abs()).max(1.0);
    if x2 > scale {
        x3 > 0.0 && x2.ln() + x1 / x2 <= (x3 + scale).ln()
    } else {
        x2 >= -scale && x1 <= scale && x3 >= -scale
    }
}

/// Membership in the polar cone up to a relative slack `tol`.
pub fn in_exp_polar(p: [f64; 3], tol: f64) -> bool {
    let [x1, x2, x3] = p;
    let scale = tol * (x1.abs() + x2.abs() + x3.abs()).max(1.0);
    if x1 > scale {
        x3 < 0.0 && x1.ln() + x2 / x1 <= (-x3 + scale).ln() + 1.0
    } else {
        x1 >= -scale && x2 <= scale && x3 <= scale
    }
}

/// Unit generator of the boundary ray through `(r, 1, e^r)` and its
/// derivative direction, both rescaled by `max(1, e^r)` before normalising.
fn generator(r: f64) -> ([f64; 3], [f64; 3]) {
    let (a, da) = if r > 0.0 {
        let em = (-r).exp();
        ([r * em, em, 1.0], [em, 0.0, 1.0])
    } else {
        let e = r.exp();
        ([r, 1.0, e], [1.0, 0.0, e])
    };
    let n = (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt();
    ([a[0] / n, a[1] / n, a[2] / n], da)
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Sign-carrying derivative of `r -> <p, u(r)>`.
fn slope(p: [f64; 3], r: f64) -> f64 {
    let (u, da) = generator(r);
    dot(p, da) - dot(p, u) * dot(u, da)
}

const GRID: usize = 145;
const TAU_MAX: f64 = 7.25;

fn sq_dist(a: [f64; 3], b: [f64; 3]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)
}

/// Euclidean projection onto `K`.
///
/// Outside `K` and its polar the projection lies on the boundary: either on
/// the face `{x1 <= 0, x2 = 0, x3 >= 0}` or on a ray `v (r, 1, e^r)`. The ray
/// maximising `<p, u(r)>` is found by a scan in `r = sinh(tau)` followed by a
/// root of the derivative; the face candidate is kept when it is closer.
pub fn project_exp_cone(p: [f64; 3]) -> Result<[f64; 3]> {
    if in_exp_cone(p, 0.0) {
        return Ok(p);
    }
    if in_exp_polar(p, 0.0) {
        return Ok([0.0; 3]);
    }
    let face = [p[0].min(0.0), 0.0, p[2].max(0.0)];

    let rs: Vec<f64> = (0..GRID)
        .map(|i| (TAU_MAX * (2.0 * i as f64 / (GRID - 1) as f64 - 1.0)).sinh())
        .collect();
    let best = (0..GRID)
        .max_by(|&i, &j| dot(p, generator(rs[i]).0).total_cmp(&dot(p, generator(rs[j]).0)))
        .expect("non-empty grid");
    let mut r = rs[best];
    if best > 0 && best + 1 < GRID {
        let (lo, hi) = (rs[best - 1], rs[best + 1]);
        if slope(p, lo) > 0.0 && slope(p, hi) < 0.0 {
            r = find_root(|t| slope(p, t), Bracket::new(lo, hi)?, Tolerance::default())?;
        }
    }
    let (u, _) = generator(r);
    let c = dot(p, u);
    if c <= 0.0 {
        return Ok(face);
    }
    let ray = [c * u[0], c * u[1], c * u[2]];
    Ok(if sq_dist(p, face) <= sq_dist(p, ray) { face } else { ray })
}
