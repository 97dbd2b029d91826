//! Regularly varying functions as values: index estimation, generalized
//! inverses and numeric checks of Potter bounds and Karamata's theorem.

mod index;
mod inverse;
mod verify;

pub use index::{estimate_rv0_index, geometric_grid, DEFAULT_LAMBDAS};
pub use inverse::{arrow_inverse, minus_inverse};
pub use verify::{
    check_asymptotic_equiv, check_potter, index_calculus, karamata_ratio, potter_grid,
    AsymptoticEquiv, CalculusOp, PotterReport, Trend,
};

use std::fmt;
use std::sync::Arc;

/// Which endpoint regular variation is asserted at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Zero,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotone {
    Nondecreasing,
    Nonincreasing,
    Unknown,
}

/// Index of regular variation; `value` may be `±inf` for rapid variation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RVIndex {
    pub value: f64,
    /// RMS residual of the log-ratio fit (0 for exact metadata).
    pub confidence: f64,
    /// Set when grid evaluation failed and the grid was cut short.
    pub truncated: bool,
}

impl RVIndex {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            confidence: 0.0,
            truncated: false,
        }
    }
}

impl From<f64> for RVIndex {
    fn from(value: f64) -> Self {
        Self::exact(value)
    }
}

/// A positive real function with domain and monotonicity metadata.
#[derive(Clone)]
pub struct RegFunc {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub domain_lo: f64,
    pub domain_hi: f64,
    pub monotone: Monotone,
    pub at: Endpoint,
    pub index: Option<RVIndex>,
}

impl RegFunc {
    /// Function on `(0, hi]`, regularly varying at zero.
    pub fn at_zero(f: impl Fn(f64) -> f64 + Send + Sync + 'static, hi: f64) -> Self {
        Self {
            f: Arc::new(f),
            domain_lo: 0.0,
            domain_hi: hi,
            monotone: Monotone::Nondecreasing,
            at: Endpoint::Zero,
            index: None,
        }
    }

    /// Function on `[lo, inf)`, regularly varying at infinity.
    pub fn at_infinity(f: impl Fn(f64) -> f64 + Send + Sync + 'static, lo: f64) -> Self {
        Self {
            f: Arc::new(f),
            domain_lo: lo,
            domain_hi: f64::INFINITY,
            monotone: Monotone::Nondecreasing,
            at: Endpoint::Infinity,
            index: None,
        }
    }

    pub fn with_monotone(mut self, monotone: Monotone) -> Self {
        self.monotone = monotone;
        self
    }

    pub fn with_index(mut self, index: impl Into<RVIndex>) -> Self {
        self.index = Some(index.into());
        self
    }

    pub fn with_domain(mut self, lo: f64, hi: f64) -> Self {
        self.domain_lo = lo;
        self.domain_hi = hi;
        self
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    /// Shared handle to the underlying closure.
    pub fn func(&self) -> Arc<dyn Fn(f64) -> f64 + Send + Sync> {
        Arc::clone(&self.f)
    }
}

impl fmt::Debug for RegFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RegFunc")
            .field("domain_lo", &self.domain_lo)
            .field("domain_hi", &self.domain_hi)
            .field("monotone", &self.monotone)
            .field("at", &self.at)
            .field("index", &self.index)
            .finish()
    }
}
