//! The two-bit super phase-spacetime `ℝ¹|²`.
//!
//! State functions `Φ = φ + φ_a θᵃ − (i/2) φ̄ ε_ab θᵃθᵇ` obey
//! `φ′ = 0`, `φ_a′ = −M^b_a φ_b`, `φ̄′ = −tr M φ̄` with
//! `M^b_a = −½ η^{bc}(H ε_ac + η′_ca)` and `ε₁₂ = 1`.
//!
//! [`StateFunction`] always holds coordinate-frame coefficients. The
//! probability formulas take the orthonormal-frame state
//! ([`StateFunction::to_frame`]) normalized at measurement time.

mod evolve;
mod probability;
mod system;
mod transition;

pub use evolve::{
    closed_form_u, equations_of_motion, evolve, expectation_at, expectation_rate_check, expectation_with, flow,
    lie_derivative, liouville_residual, propagator_u, trajectory, Flow, Observable, ObservablePath, StateFunction,
};
pub use probability::{
    delta_cone, delta_ellipsoid, probabilities, state_from_probabilities, ProbabilityVector, NORM_TOL, PROB_TOL,
};
pub use system::{EtaPath, ScalarPath, TwoBitSystem};
pub use transition::{apply as apply_transition, mat4_mul, transition_for_angle, transition_matrix, Mat4};

use crate::measure::indicators_m2;
use crate::Result;

/// Probabilities measured at time `t` in the orthonormal frame of `η(t)`,
/// after normalizing.
pub fn measure_probabilities(sys: &TwoBitSystem, state: &StateFunction, t: f64) -> Result<ProbabilityVector> {
    let eta = sys.eta_at(t)?;
    probabilities(&state.normalized(&eta)?.to_frame(&eta)?)
}

/// The indicators `X₁…X₄` as observables.
pub fn indicator_observables() -> [Observable; 4] {
    indicators_m2().x.map(|x| Observable::from_multivector(&x).expect("indicators are hermitean"))
}
