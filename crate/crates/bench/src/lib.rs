//! Fixtures shared by the criterion benches.

use karamata_core::rates::PhiSpec;
use karamata_core::scenario::{build_setup, ScenarioId, ScenarioSetup};
use karamata_core::{Point, RegFunc};

/// The Hölder-entropic AP setup from `(0.3, 0.2)`.
pub fn holder_entropic_setup() -> ScenarioSetup {
    build_setup(ScenarioId::HolderEntropicAp, &Point::from([0.3, 0.2]))
        .expect("catalog scenario builds")
}

/// `phi` for `psi_B(t) = -sqrt(t) ln t` under AP constants.
pub fn holder_entropic_spec() -> PhiSpec {
    let psi = RegFunc::at_zero(
        |t: f64| if t <= 0.0 { 0.0 } else { -t.sqrt() * t.ln() },
        (-2.0f64).exp(),
    )
    .with_index(0.5);
    PhiSpec::new(psi, 0.5, 1.0, 2, 1e-3)
}

/// Deterministic points in `[-2, 2]^3`.
pub fn cube_points(n: usize) -> Vec<[f64; 3]> {
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64 * 4.0 - 2.0
    };
    (0..n).map(|_| [next(), next(), next()]).collect()
}
