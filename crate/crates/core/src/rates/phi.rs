use std::cell::RefCell;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::numerics::{find_root, integrate, Bracket, Tolerance};
use crate::regvar::{minus_inverse, RegFunc};

const FLOOR: f64 = 1e-300;
/// Table spacing in `ln t`.
const STEP: f64 = 1.0 / 32.0;

/// Ingredients of `phi(u) = psi_B(sqrt(c u))^2` on `(0, a_hat]`.
#[derive(Debug, Clone)]
pub struct PhiSpec {
    pub psi_b: RegFunc,
    /// Averagedness constant of the operators.
    pub alpha: f64,
    /// Lower bound on the positive weights.
    pub nu: f64,
    /// Covering window of the schedule.
    pub s: u64,
    pub a_hat: f64,
    /// Upper limit of the rate integral; `min(a_hat, phi(a_hat))` when unset.
    pub delta: Option<f64>,
}

impl PhiSpec {
    pub fn new(psi_b: RegFunc, alpha: f64, nu: f64, s: u64, a_hat: f64) -> Self {
        Self {
            psi_b,
            alpha,
            nu,
            s,
            a_hat,
            delta: None,
        }
    }

    /// `c = 2 alpha (1 + 4 nu s) / (nu (1 - alpha))`.
    pub fn factor(&self) -> Result<f64> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Parameter(format!("alpha = {} not in (0, 1)", self.alpha)));
        }
        if !(self.nu > 0.0 && self.nu <= 1.0) {
            return Err(Error::Parameter(format!("nu = {} not in (0, 1]", self.nu)));
        }
        if self.s == 0 {
            return Err(Error::Parameter("s must be positive".into()));
        }
        if !(self.a_hat > 0.0) {
            return Err(Error::Parameter(format!("a_hat = {} must be positive", self.a_hat)));
        }
        let s = self.s as f64;
        Ok(2.0 * self.alpha * (1.0 + 4.0 * self.nu * s) / (self.nu * (1.0 - self.alpha)))
    }
}

pub fn build_phi(spec: &PhiSpec) -> Result<RegFunc> {
    let c = spec.factor()?;
    let psi = spec.psi_b.func();
    let mut phi = RegFunc::at_zero(
        move |u: f64| {
            let v = psi((c * u).sqrt());
            v * v
        },
        spec.a_hat,
    )
    .with_monotone(spec.psi_b.monotone);
    phi.index = spec.psi_b.index;
    Ok(phi)
}

fn quad_tol() -> Tolerance {
    Tolerance {
        abs_tol: 0.0,
        rel_tol: 1e-13,
        max_iter: 2000,
    }
}

/// `t / phi^-(t)` at `t = e^l`: the rate integrand in logarithmic variables.
/// A vanishing inverse is stashed in `fail` and surfaces as NaN.
fn log_integrand<'a>(phi: &'a RegFunc, fail: &'a RefCell<Option<Error>>) -> impl Fn(f64) -> f64 + 'a {
    move |l: f64| {
        let t = l.exp();
        match minus_inverse(phi, t) {
            Ok(m) if m > 0.0 => t / m,
            Ok(_) => {
                fail.borrow_mut().get_or_insert(Error::Singularity { at: t });
                f64::NAN
            }
            Err(e) => {
                fail.borrow_mut().get_or_insert(e);
                f64::NAN
            }
        }
    }
}

/// `int_{e^a}^{e^b} dt / phi^-(t)` for `a < b`.
fn log_segment(phi: &RegFunc, a: f64, b: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let fail = RefCell::new(None);
    let r = integrate(log_integrand(phi, &fail), Bracket::new(a, b)?, quad_tol());
    match fail.into_inner() {
        Some(e) => Err(e),
        None => r,
    }
}

fn inverse_at(phi: &RegFunc, t: f64) -> Result<f64> {
    let m = minus_inverse(phi, t)?;
    if m > 0.0 {
        Ok(m)
    } else {
        Err(Error::Singularity { at: t })
    }
}

/// The oriented rate integral `Phi(u) = int_u^delta dt / phi^-(t)`.
pub fn phi_big(phi: &RegFunc, delta: f64, u: f64) -> Result<f64> {
    if !(u > 0.0 && delta > 0.0) {
        return Err(Error::Domain {
            what: "rate integral needs u > 0 and delta > 0",
            value: u,
        });
    }
    let (a, b) = (u.ln(), delta.ln());
    if a <= b {
        log_segment(phi, a, b)
    } else {
        Ok(-log_segment(phi, b, a)?)
    }
}

/// Solves `Phi(u) = y` by bracketing in `ln u` and Brent refinement.
pub fn invert_phi_big(phi: &RegFunc, delta: f64, y: f64) -> Result<f64> {
    if y == 0.0 {
        return Ok(delta);
    }
    let ld = delta.ln();
    let tol = Tolerance::default();
    if y > 0.0 {
        // walk down in ln u, integrating only the new piece each time
        let (mut hi, mut big_hi) = (ld, 0.0);
        let mut step = 1.0;
        loop {
            let lo = (hi - step).max(FLOOR.ln());
            let big_lo = big_hi + log_segment(phi, lo, hi)?;
            if big_lo >= y {
                let l = find_root(|l| big_hi + log_segment(phi, l, hi).unwrap_or(f64::NAN) - y, Bracket::new(lo, hi)?, tol)?;
                return Ok(l.exp());
            }
            if lo <= FLOOR.ln() {
                return Err(Error::Underflow {
                    lo: FLOOR,
                    hi: hi.exp(),
                });
            }
            hi = lo;
            big_hi = big_lo;
            step *= 2.0;
        }
    } else {
        let (mut lo, mut big_lo) = (ld, 0.0);
        let mut step = 1.0;
        loop {
            let hi = lo + step;
            if hi > 690.0 {
                return Err(Error::Bracket {
                    target: y,
                    lo: delta,
                    hi: hi.exp(),
                });
            }
            let big_hi = big_lo - log_segment(phi, lo, hi)?;
            if big_hi <= y {
                let l = find_root(|l| big_lo - log_segment(phi, lo, l).unwrap_or(f64::NAN) - y, Bracket::new(lo, hi)?, tol)?;
                return Ok(l.exp());
            }
            lo = hi;
            big_lo = big_hi;
            step *= 2.0;
        }
    }
}

#[derive(Debug, Default)]
struct Table {
    /// `ln t`, decreasing from `ln delta`.
    ell: Vec<f64>,
    /// `Phi(e^ell)`, increasing.
    big: Vec<f64>,
    /// `e^ell / phi^-(e^ell) = -dPhi/d ell`.
    rate: Vec<f64>,
    exhausted: bool,
}

/// `k -> sqrt(Phi^-1(Phi(d0^2) + floor(k / s)))`, backed by a lazily grown
/// table of `Phi` on a uniform grid in `ln t`.
#[derive(Debug)]
pub struct RateBoundFn {
    phi: RegFunc,
    delta: f64,
    s: u64,
    d0_sq: f64,
    phi_of_d0sq: f64,
    table: Mutex<Table>,
}

impl RateBoundFn {
    pub fn new(spec: &PhiSpec, d0_sq: f64) -> Result<Self> {
        if !(d0_sq > 0.0 && d0_sq.is_finite()) {
            return Err(Error::Domain {
                what: "initial squared distance must be positive",
                value: d0_sq,
            });
        }
        let mut spec = spec.clone();
        if d0_sq >= spec.a_hat {
            spec.a_hat = 2.0 * d0_sq;
        }
        let phi = build_phi(&spec)?;
        let delta = spec
            .delta
            .unwrap_or_else(|| spec.a_hat.min(phi.eval(spec.a_hat)));
        if !(delta > 0.0) {
            return Err(Error::Parameter(format!("delta = {delta} must be positive")));
        }
        let phi_of_d0sq = phi_big(&phi, delta, d0_sq)?;
        let rate0 = delta / inverse_at(&phi, delta)?;
        Ok(Self {
            phi,
            delta,
            s: spec.s,
            d0_sq,
            phi_of_d0sq,
            table: Mutex::new(Table {
                ell: vec![delta.ln()],
                big: vec![0.0],
                rate: vec![rate0],
                exhausted: false,
            }),
        })
    }

    pub fn phi(&self) -> &RegFunc {
        &self.phi
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn phi_of_d0sq(&self) -> f64 {
        self.phi_of_d0sq
    }

    /// Bound after `k` iterations.
    pub fn bound(&self, k: u64) -> Result<f64> {
        let m = k / self.s;
        if m == 0 {
            return Ok(self.d0_sq.sqrt());
        }
        Ok(self.inverse(self.phi_of_d0sq + m as f64)?.sqrt())
    }

    /// `Phi^-1(y)`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if y <= 0.0 {
            // between delta and d0^2: direct solve
            return invert_phi_big(&self.phi, self.delta, y);
        }
        let mut table = self.table.lock().expect("rate table poisoned");
        self.extend(&mut table, y)?;
        let j = table.big.partition_point(|&b| b < y).max(1);
        let (l0, l1) = (table.ell[j - 1], table.ell[j]);
        let (b0, b1) = (table.big[j - 1], table.big[j]);
        // cubic Hermite for ell(Phi) with d ell / d Phi = -1 / rate
        let h = b1 - b0;
        let s = (y - b0) / h;
        let (m0, m1) = (-h / table.rate[j - 1], -h / table.rate[j]);
        let s2 = s * s;
        let s3 = s2 * s;
        let mut l = (2.0 * s3 - 3.0 * s2 + 1.0) * l0
            + (s3 - 2.0 * s2 + s) * m0
            + (-2.0 * s3 + 3.0 * s2) * l1
            + (s3 - s2) * m1;
        l = l.clamp(l1, l0);
        drop(table);
        // Newton polish against the exact segment integral
        for _ in 0..3 {
            let big = b0 + log_segment(&self.phi, l, l0)?;
            let t = l.exp();
            let rate = t / inverse_at(&self.phi, t)?;
            let next = (l + (big - y) / rate).clamp(l1, l0);
            let done = (next - l).abs() <= 4.0 * f64::EPSILON * l.abs().max(1.0);
            l = next;
            if done {
                break;
            }
        }
        Ok(l.exp())
    }

    fn extend(&self, table: &mut Table, y: f64) -> Result<()> {
        while *table.big.last().expect("table never empty") < y {
            let last = *table.ell.last().expect("table never empty");
            if table.exhausted || last <= FLOOR.ln() {
                table.exhausted = true;
                return Err(Error::Underflow {
                    lo: FLOOR,
                    hi: last.exp(),
                });
            }
            let next = (last - STEP).max(FLOOR.ln());
            let big = table.big.last().unwrap() + log_segment(&self.phi, next, last)?;
            let t = next.exp();
            table.ell.push(next);
            table.big.push(big);
            table.rate.push(t / inverse_at(&self.phi, t)?);
        }
        Ok(())
    }
}

/// One-shot `R(k)`; build a [`RateBoundFn`] to evaluate many `k`.
pub fn rate_bound(spec: &PhiSpec, d0_sq: f64, k: u64) -> Result<f64> {
    RateBoundFn::new(spec, d0_sq)?.bound(k)
}

/// `g(s) = 1 / (s phi^-(1/s))`.
pub fn g_function(phi: &RegFunc, s: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Domain {
            what: "g needs s > 0",
            value: s,
        });
    }
    Ok(1.0 / (s * inverse_at(phi, 1.0 / s)?))
}

/// `s^alpha g(s)`.
pub fn g_hat(phi: &RegFunc, s: f64, alpha: f64) -> Result<f64> {
    Ok(s.powf(alpha) * g_function(phi, s)?)
}
