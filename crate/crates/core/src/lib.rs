//! Quasi-cyclic fixed-point iterations and convergence-rate bounds driven by
//! regularly varying error bounds.
//!
//! The crate is organised bottom-up:
//!
//! - [`numerics`]: Lambert W, adaptive quadrature, bracketed root finding.
//! - [`regvar`]: regularly varying functions, index estimation, generalized inverses.
//! - [`rates`]: the rate integral, its inverse and the resulting bound `R(k)`.
//! - [`operators`]: projections, Douglas-Rachford, residuals and distances.
//! - [`solver`]: the quasi-cyclic iteration, Fejér audits, empirical error bounds.
//! - [`scenario`]: the example catalog, rate reports and CSV output.

pub mod error;
pub mod numerics;
pub mod operators;
pub mod rates;
pub mod regvar;
pub mod scenario;
pub mod solver;

pub use error::{Error, Result};
pub use numerics::{Bracket, Tolerance};
pub use operators::{FixedPointOperator, Point, SetDescriptor};
pub use rates::{PhiSpec, RateBoundFn, RateProfile, Regime};
pub use regvar::{Endpoint, Monotone, RVIndex, RegFunc};
pub use scenario::{RateReport, ScenarioConfig, ScenarioId};
pub use solver::{IterationTrace, QuasiCyclicSchedule, StopCriteria};


