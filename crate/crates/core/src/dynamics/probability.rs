use super::evolve::StateFunction;
use crate::{Error, Result};

/// Tolerance on `(Φ, Φ) = 1` accepted by [`probabilities`].
pub const NORM_TOL: f64 = 1e-9;

/// Tolerance on `Σ pᵢ = 1` and on `Δ_ellipsoid ≤ 0` accepted by
/// [`state_from_probabilities`].
pub const PROB_TOL: f64 = 1e-12;

/// Indicator expectations `(p₁, p₂, p₃, p₄)` with the two quadratic
/// constraints evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityVector {
    pub p: [f64; 4],
    pub delta_ellipsoid: f64,
    pub delta_cone: f64,
}

/// `Δ_ellipsoid = 6((p₁+p₂+p₃)² − (p₁+p₂+p₃ + p₁p₂+p₂p₃+p₁p₃) + 1/3)`.
pub fn delta_ellipsoid(p1: f64, p2: f64, p3: f64) -> f64 {
    let s = p1 + p2 + p3;
    let q = p1 * p2 + p2 * p3 + p1 * p3;
    6.0 * (s * s - (s + q) + 1.0 / 3.0)
}

/// `Δ_cone = p₁² + p₂² + p₃² − 2(p₁p₂ + p₁p₃ + p₂p₃)`.
pub fn delta_cone(p1: f64, p2: f64, p3: f64) -> f64 {
    p1 * p1 + p2 * p2 + p3 * p3 - 2.0 * (p1 * p2 + p1 * p3 + p2 * p3)
}

impl ProbabilityVector {
    pub fn new(p: [f64; 4]) -> Self {
        Self {
            p,
            delta_ellipsoid: delta_ellipsoid(p[0], p[1], p[2]),
            delta_cone: delta_cone(p[0], p[1], p[2]),
        }
    }

    /// From `(p₁, p₂, p₃)` with `p₄ = 1 − p₁ − p₂ − p₃`.
    pub fn from_three(p1: f64, p2: f64, p3: f64) -> Self {
        Self::new([p1, p2, p3, 1.0 - p1 - p2 - p3])
    }

    pub fn sum(&self) -> f64 {
        self.p.iter().sum()
    }

    /// `p₁, p₂, p₃ ≥ 0` and `p₁ + p₂ + p₃ ≤ 1`.
    pub fn in_simplex(&self) -> bool {
        self.p[..3].iter().all(|&x| x >= 0.0) && self.p[0] + self.p[1] + self.p[2] <= 1.0
    }

    pub fn in_ellipsoid(&self) -> bool {
        self.delta_ellipsoid <= 0.0
    }

    pub fn in_cone(&self) -> bool {
        self.delta_cone <= 0.0
    }
}

/// Indicator expectations of a normalized state given in an orthonormal
/// frame (`η = δ`).
pub fn probabilities(state: &StateFunction) -> Result<ProbabilityVector> {
    let norm = state.phi * state.phi
        + state.phi_a[0] * state.phi_a[0]
        + state.phi_a[1] * state.phi_a[1]
        + state.phibar * state.phibar;
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::NotNormalized { norm });
    }
    let StateFunction { phi, phi_a: [f1, f2], phibar } = *state;
    let (s2, s6, s8) = (libm::sqrt(2.0), libm::sqrt(6.0), libm::sqrt(8.0));
    Ok(ProbabilityVector::new([
        0.25 + phi * (s8 * f1 - phibar) / 6.0,
        0.25 + phi * (-s2 * f1 + s6 * f2 - phibar) / 6.0,
        0.25 + phi * (-s2 * f1 - s6 * f2 - phibar) / 6.0,
        0.25 + phi * phibar / 2.0,
    ]))
}

/// The normalized frame state with the given indicator expectations, on
/// the root `φ = √(1 + 2√(−Δ_ellipsoid)) / √2`.
pub fn state_from_probabilities(p: &ProbabilityVector) -> Result<StateFunction> {
    if p.p.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidProbabilities("non-finite entry"));
    }
    if (p.sum() - 1.0).abs() > PROB_TOL {
        return Err(Error::InvalidProbabilities("entries must sum to one"));
    }
    let [p1, p2, p3, _] = p.p;
    let delta = delta_ellipsoid(p1, p2, p3);
    if delta > PROB_TOL {
        return Err(Error::OutsideCone { delta });
    }
    let s2 = libm::sqrt(2.0);
    let phi = libm::sqrt(1.0 + 2.0 * libm::sqrt((-delta).max(0.0))) / s2;
    Ok(StateFunction::new(
        phi,
        [(2.0 * p1 - p2 - p3) / (s2 * phi), libm::sqrt(3.0) * (p2 - p3) / (s2 * phi)],
        (3.0 - 4.0 * (p1 + p2 + p3)) / (2.0 * phi),
    ))
}
