//! Epigraphs of even convex functions on `[-b, b]`, including the
//! Hölder-entropic set `{(x, mu) : mu >= gamma(x), |x| <= 1/2}`.

use crate::error::{Error, Result};
use crate::numerics::{find_root, lambert_wm1, Bracket, Tolerance};

/// Half-width of the domain of `gamma`.
pub const GAMMA_HALF_WIDTH: f64 = 0.5;

fn gamma_unchecked(a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    // e^{2 W} = x^2 / (4 W^2) avoids the underflowing exponential
    let w = lambert_wm1(-0.5 * a).expect("argument in [-1/4, 0)");
    a * a / (4.0 * w * w)
}

fn gamma_prime_unchecked(a: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    let w = lambert_wm1(-0.5 * a).expect("argument in [-1/4, 0)");
    let g = a * a / (4.0 * w * w);
    2.0 * g * w / (a * (1.0 + w))
}

/// `gamma(x) = exp(2 W_{-1}(-|x| / 2))` on `[-1/2, 1/2]`, `gamma(0) = 0`.
pub fn gamma(x: f64) -> Result<f64> {
    let a = x.abs();
    if !(a <= GAMMA_HALF_WIDTH) {
        return Err(Error::Domain {
            what: "gamma needs |x| <= 1/2",
            value: x,
        });
    }
    Ok(gamma_unchecked(a))
}

/// `gamma^{-1}(y) = -sqrt(y) ln y`.
///
/// Accepted on `[0, e^-2]`, the range where the formula is increasing; it
/// inverts `gamma` on `[0, gamma(1/2)]`.
pub fn gamma_inv(y: f64) -> Result<f64> {
    if !(y >= 0.0 && y <= (-2f64).exp()) {
        return Err(Error::Domain {
            what: "gamma_inv needs 0 <= y <= e^-2",
            value: y,
        });
    }
    if y == 0.0 {
        return Ok(0.0);
    }
    Ok(-y.sqrt() * y.ln())
}

/// Even convex profile `h` with `h(0) = 0`, increasing on `[0, b]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpiProfile {
    /// The Hölder-entropic `gamma`, `b = 1/2`.
    Gamma,
    /// `|x|^p`, `p >= 1`, unbounded domain.
    Power { p: f64 },
    /// `exp(-|x|^(-1/g))` up to its inflection point.
    Log { g: f64 },
}

impl EpiProfile {
    pub fn half_width(&self) -> f64 {
        match *self {
            EpiProfile::Gamma => GAMMA_HALF_WIDTH,
            EpiProfile::Power { .. } => f64::INFINITY,
            EpiProfile::Log { g } => {
                let q = 1.0 / g;
                (q / (q + 1.0)).powf(g)
            }
        }
    }

    /// `h(|x|)` for `|x|` within the domain.
    pub fn h(&self, a: f64) -> f64 {
        match *self {
            EpiProfile::Gamma => gamma_unchecked(a),
            EpiProfile::Power { p } => a.powf(p),
            EpiProfile::Log { g } => {
                if a == 0.0 {
                    0.0
                } else {
                    (-a.powf(-1.0 / g)).exp()
                }
            }
        }
    }

    pub fn dh(&self, a: f64) -> f64 {
        match *self {
            EpiProfile::Gamma => gamma_prime_unchecked(a),
            EpiProfile::Power { p } => {
                if a == 0.0 {
                    if p == 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    p * a.powf(p - 1.0)
                }
            }
            EpiProfile::Log { g } => {
                if a == 0.0 {
                    0.0
                } else {
                    let q = 1.0 / g;
                    q * a.powf(-q - 1.0) * self.h(a)
                }
            }
        }
    }

    /// Inverse of `h` on `[0, b]`, saturating at `b`.
    pub fn inv(&self, y: f64) -> f64 {
        let b = self.half_width();
        if y <= 0.0 {
            return 0.0;
        }
        if b.is_finite() && y >= self.h(b) {
            return b;
        }
        match *self {
            EpiProfile::Gamma => -y.sqrt() * y.ln(),
            EpiProfile::Power { p } => y.powf(1.0 / p),
            EpiProfile::Log { g } => (-1.0 / y.ln()).powf(g),
        }
    }

    pub fn contains(&self, x: f64, mu: f64) -> bool {
        let a = x.abs();
        a <= self.half_width() && mu >= self.h(a)
    }

    /// Euclidean projection of `(x, mu)` onto the epigraph.
    ///
    /// For `|x| = a` the nearest abscissa minimises
    /// `(t - a)^2 + max(h(t) - mu, 0)^2` over `t in [0, min(a, b)]`, a convex
    /// problem solved by a root of its derivative.
    pub fn project(&self, x: f64, mu: f64) -> Result<(f64, f64)> {
        let a = x.abs();
        if self.contains(x, mu) {
            return Ok((x, mu));
        }
        let hi = a.min(self.half_width());
        if hi == 0.0 {
            return Ok((0.0, mu.max(0.0)));
        }
        let slope = |t: f64| (t - a) + (self.h(t) - mu).max(0.0) * self.dh(t);
        let t = if slope(hi) <= 0.0 {
            hi
        } else if slope(0.0) >= 0.0 {
            // a kink at the origin (p = 1) can absorb the whole slope
            0.0
        } else {
            let tol = Tolerance::default();
            find_root(slope, Bracket::new(0.0, hi)?, tol)?
        };
        Ok((t.copysign(x), self.h(t).max(mu)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_pair() {
        let e2 = (-2f64).exp();
        assert!((gamma_inv(e2).unwrap() - 2.0 / std::f64::consts::E).abs() < 1e-15);
        let y = 0.01;
        assert!((gamma(gamma_inv(y).unwrap()).unwrap() - y).abs() < 1e-10);
        let g5 = gamma(0.5).unwrap();
        assert!(g5 > 0.0 && g5 < 1.0);
        assert!(gamma(0.6).is_err());
        assert!(gamma_inv(-1.0).is_err());
        assert_eq!(gamma(0.0).unwrap(), 0.0);
        assert_eq!(gamma(1e-310).unwrap(), 0.0);
    }

    #[test]
    fn cone_projects_to_apex() {
        let cone = EpiProfile::Power { p: 1.0 };
        assert_eq!(cone.project(0.2, -0.5).unwrap(), (0.0, 0.0));
        let (x, mu) = cone.project(1.0, 0.0).unwrap();
        assert!((x - 0.5).abs() < 1e-12 && (mu - 0.5).abs() < 1e-12);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        for &x in &[0.01, 0.1, 0.3, 0.49] {
            let h = 1e-7;
            let fd = (gamma(x + h).unwrap() - gamma(x - h).unwrap()) / (2.0 * h);
            let an = EpiProfile::Gamma.dh(x);
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1e-3), "{x}: {fd} vs {an}");
        }
    }

    #[test]
    fn projection_is_symmetric_and_on_boundary() {
        let (x, mu) = EpiProfile::Gamma.project(0.1, 0.0).unwrap();
        assert!(x > 0.0 && x < 0.1);
        assert!((mu - gamma(x).unwrap()).abs() < 1e-15);
        let (xm, mum) = EpiProfile::Gamma.project(-0.1, 0.0).unwrap();
        assert_eq!((xm, mum), (-x, mu));
    }

    #[test]
    fn wall_projection() {
        // beyond the domain and above the profile: straight onto the wall
        let (x, mu) = EpiProfile::Gamma.project(0.8, 0.3).unwrap();
        assert_eq!((x, mu), (0.5, 0.3));
    }
}
