//! One-dimensional numerics: Lambert W, adaptive quadrature and bracketed
//! root finding.

mod lambert;
mod quad;
mod roots;

pub use lambert::{lambert_w0, lambert_wm1, BRANCH_POINT};
pub use quad::integrate;
pub use roots::{find_root, invert_monotone};

use crate::error::{Error, Result};

/// A finite interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::Parameter(format!("bad bracket [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Stopping rule shared by the iterative routines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol >= 0.0 && rel_tol >= 0.0) || abs_tol + rel_tol <= 0.0 || max_iter == 0 {
            return Err(Error::Parameter(format!(
                "bad tolerance abs={abs_tol} rel={rel_tol} max_iter={max_iter}"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_iter,
        })
    }

    /// Acceptance threshold for a quantity of magnitude `scale`.
    pub fn bound(&self, scale: f64) -> f64 {
        self.abs_tol + self.rel_tol * scale.abs()
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_iter: 200,
        }
    }
}
