//! Rate pipeline: from an error-bound function `psi_B` to `phi`, the rate
//! integral `Phi`, its inverse and the concrete bound `R(k)`, plus index-based
//! classification and closed-form asymptotic profiles.

mod phi;
mod profile;

pub use phi::{
    build_phi, g_function, g_hat, invert_phi_big, phi_big, rate_bound, PhiSpec, RateBoundFn,
};
pub use profile::{asymptotic_profile, ProfileCase, RateProfile};

use crate::error::{Error, Result};
use crate::regvar::{estimate_rv0_index, geometric_grid, RVIndex, RegFunc, DEFAULT_LAMBDAS};

const INDEX_EPS: f64 = 1e-9;

/// Qualitative convergence regime of the bound `sqrt(Phi^-1(k))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    Linear,
    AlmostLinear,
    /// `phi` regularly varying with index `rho` in `(0, 1)`.
    Sublinear { rho: f64 },
    SubPolynomial,
}

impl Regime {
    /// Index of `Phi^-1` at infinity, `rho / (rho - 1)`, for the sublinear case.
    pub fn phi_inv_index(&self) -> Option<f64> {
        match *self {
            Regime::Sublinear { rho } => Some(rho / (rho - 1.0)),
            _ => None,
        }
    }

    /// Supremum of exponents `r` with `sqrt(Phi^-1(k)) = o(k^-r)`.
    pub fn exponent_sup(&self) -> f64 {
        match *self {
            Regime::Sublinear { rho } => rho / (2.0 * (1.0 - rho)),
            Regime::SubPolynomial => 0.0,
            Regime::Linear | Regime::AlmostLinear => f64::INFINITY,
        }
    }

    pub fn tag(&self) -> String {
        match *self {
            Regime::Linear => "linear".into(),
            Regime::AlmostLinear => "almost_linear".into(),
            Regime::Sublinear { rho } => format!("sublinear({})", rho / (2.0 * (1.0 - rho))),
            Regime::SubPolynomial => "sub_polynomial".into(),
        }
    }
}

/// Regime implied by the index of `phi` at zero.
///
/// Index one only gives the almost-linear rate when `phi` is also bounded
/// below by a linear function near zero (`linear_floor`).
pub fn classify_rate(rho: RVIndex, linear_floor: bool) -> Result<Regime> {
    let r = rho.value;
    if !(r >= -INDEX_EPS && r <= 1.0 + INDEX_EPS) {
        return Err(Error::Parameter(format!("index {r} outside [0, 1]")));
    }
    if r >= 1.0 - INDEX_EPS {
        if linear_floor {
            Ok(Regime::AlmostLinear)
        } else {
            Err(Error::Unsupported(
                "index one without a linear lower bound has no rate guarantee".into(),
            ))
        }
    } else if r <= INDEX_EPS {
        Ok(Regime::SubPolynomial)
    } else {
        Ok(Regime::Sublinear { rho: r })
    }
}

fn index_of(f: &RegFunc) -> Result<RVIndex> {
    match f.index {
        Some(i) => Ok(i),
        None => estimate_rv0_index(f, &DEFAULT_LAMBDAS, &geometric_grid(f.domain_hi.min(1.0))),
    }
}

/// `psi_B = Theta o (Gamma_1 + ... + Gamma_m)`, with index `theta * min rho_i`.
pub fn compose_psi(theta: &RegFunc, gammas: &[RegFunc]) -> Result<RegFunc> {
    if gammas.is_empty() {
        return Err(Error::Parameter("compose_psi needs at least one inner function".into()));
    }
    let th = index_of(theta)?.value;
    let mut rho = f64::INFINITY;
    for g in gammas {
        rho = rho.min(index_of(g)?.value);
    }
    let index = th * rho;
    if index.is_nan() {
        return Err(Error::Indeterminate(format!("{th} * {rho}")));
    }
    let hi = gammas.iter().map(|g| g.domain_hi).fold(f64::INFINITY, f64::min);
    let outer = theta.func();
    let inner: Vec<_> = gammas.iter().map(RegFunc::func).collect();
    Ok(RegFunc::at_zero(
        move |t| outer(inner.iter().map(|g| g(t)).sum()),
        hi,
    )
    .with_index(index))
}
