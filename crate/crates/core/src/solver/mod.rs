//! Quasi-cyclic iteration, trace recording and trace audits.

mod empirical;
mod fejer;
mod halton;
mod run;
mod schedule;

pub use empirical::{estimate_empirical_psi, EmpiricalPsi, PsiSampling};
pub use fejer::{audit_fejer, FejerReport, FejerViolation};
pub use halton::Halton;
pub use run::{run, run_with_target, IterRecord, IterationTrace, StopCriteria, StopReason};
pub use schedule::{QuasiCyclicSchedule, WeightRule};
