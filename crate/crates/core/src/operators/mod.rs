//! Projections, fixed-point operators, residuals and exact distances.

mod epigraph;
mod expcone;
mod fixed_point;
mod point;
mod sets;

pub use epigraph::{gamma, gamma_inv, EpiProfile, GAMMA_HALF_WIDTH};
pub use expcone::{in_exp_cone, in_exp_polar, project_exp_cone};
pub use fixed_point::{average, combine, dr_operator, residual, FixedPointOperator};
pub use point::Point;
pub use sets::SetDescriptor;
