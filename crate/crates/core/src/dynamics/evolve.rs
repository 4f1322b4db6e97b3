use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use super::system::TwoBitSystem;
use crate::grassmann::Multivector;
use crate::linalg::{
    mat2_add, mat2_det, mat2_expm, mat2_inverse, mat2_mul, mat2_mul_vec, mat2_scale, mat2_trace, mat2_transpose,
    Mat2, EPSILON2, IDENTITY2,
};
use crate::{re, Error, Result, Scalar};

/// Coefficients of `Φ = φ + φ_a θᵃ − (i/2) φ̄ ε_ab θᵃθᵇ` in the coordinate
/// frame `θᵃ` at one time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateFunction {
    pub phi: f64,
    pub phi_a: [f64; 2],
    pub phibar: f64,
}

impl StateFunction {
    pub const fn new(phi: f64, phi_a: [f64; 2], phibar: f64) -> Self {
        Self { phi, phi_a, phibar }
    }

    pub fn to_multivector(&self) -> Multivector {
        Multivector::from_terms(
            2,
            [
                (0, re(self.phi)),
                (1, re(self.phi_a[0])),
                (2, re(self.phi_a[1])),
                (3, Scalar::new(0.0, -self.phibar)),
            ],
        )
        .expect("m = 2")
    }

    /// Reads a hermitean `m = 2` superfield.
    pub fn from_multivector(f: &Multivector) -> Result<Self> {
        if f.m() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: f.m() });
        }
        if !f.is_hermitean_within(1e-12 * f.max_abs().max(1.0)) {
            return Err(Error::NotHermitean);
        }
        Ok(Self::new(f.coeff(0).re, [f.coeff(1).re, f.coeff(2).re], -f.coeff(3).im))
    }

    /// `(Φ, Φ) = φ² + φ_a η^{ab} φ_b + det⁻¹η φ̄²`.
    pub fn norm(&self, eta: &Mat2) -> Result<f64> {
        let inv = mat2_inverse(eta)?;
        let v = mat2_mul_vec(&inv, &self.phi_a);
        Ok(self.phi * self.phi + self.phi_a[0] * v[0] + self.phi_a[1] * v[1] + self.phibar * self.phibar / mat2_det(eta))
    }

    /// Coordinates in the orthonormal frame `θ^ā = e_a^ā θᵃ`, `e eᵀ = η`
    /// (Cholesky): `φ_ā = (e⁻¹)_{āa} φ_a`, `φ̄_frame = φ̄ / det e`.
    pub fn to_frame(&self, eta: &Mat2) -> Result<Self> {
        let e = cholesky2(eta)?;
        let e_inv = mat2_inverse(&e)?;
        Ok(Self::new(self.phi, mat2_mul_vec(&e_inv, &self.phi_a), self.phibar / mat2_det(&e)))
    }

    pub fn from_frame(&self, eta: &Mat2) -> Result<Self> {
        let e = cholesky2(eta)?;
        Ok(Self::new(self.phi, mat2_mul_vec(&e, &self.phi_a), self.phibar * mat2_det(&e)))
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::new(self.phi * c, [self.phi_a[0] * c, self.phi_a[1] * c], self.phibar * c)
    }

    /// Rescaled to unit norm for the metric `η`.
    pub fn normalized(&self, eta: &Mat2) -> Result<Self> {
        let n = self.norm(eta)?;
        if n <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(self.scale(1.0 / libm::sqrt(n)))
    }

    fn as_array(&self) -> [f64; 4] {
        [self.phi, self.phi_a[0], self.phi_a[1], self.phibar]
    }

    fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

fn cholesky2(eta: &Mat2) -> Result<Mat2> {
    if !(eta[0][0] > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    let l11 = libm::sqrt(eta[0][0]);
    let l21 = eta[1][0] / l11;
    let d = eta[1][1] - l21 * l21;
    if !(d > 0.0) {
        return Err(Error::NotPositiveDefinite);
    }
    Ok([[l11, 0.0], [l21, libm::sqrt(d)]])
}

/// Gauss–Legendre nodes on `[0, 1]`.
const GAUSS: [f64; 2] = [0.5 - 0.288_675_134_594_812_9, 0.5 + 0.288_675_134_594_812_9];
const SQRT3: f64 = 1.732_050_807_568_877_2;

/// Evolution from `T` to `t`: `φ_vec(t) = Y φ_vec(T)`, `φ̄(t) = u φ̄(T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flow {
    /// Solves `Y′ = −Mᵀ Y`, `Y(T) = 1`.
    pub y: Mat2,
    /// `exp(−∫ tr M)`.
    pub u: f64,
}

impl Flow {
    pub const IDENTITY: Flow = Flow { y: IDENTITY2, u: 1.0 };

    pub fn apply(&self, s: &StateFunction) -> StateFunction {
        StateFunction::new(s.phi, mat2_mul_vec(&self.y, &s.phi_a), self.u * s.phibar)
    }

    /// `U(t, T)` with `φ_a(t) = U^b_a φ_b(T)`, stored as `u[b][a]`.
    pub fn u_matrix(&self) -> Mat2 {
        mat2_transpose(&self.y)
    }
}

fn commutator(a: &Mat2, b: &Mat2) -> Mat2 {
    mat2_add(&mat2_mul(a, b), &mat2_scale(&mat2_mul(b, a), -1.0))
}

/// Path-ordered flow from `from` to `to` by fourth-order Magnus steps of
/// size at most `sys.step` (either direction).
pub fn flow(sys: &TwoBitSystem, from: f64, to: f64) -> Result<Flow> {
    sys.check_time(from)?;
    sys.check_time(to)?;
    let span = to - from;
    if span == 0.0 {
        return Ok(Flow::IDENTITY);
    }
    let steps = libm::ceil(span.abs() / sys.step).max(1.0) as usize;
    let h = span / steps as f64;
    let a_at = |t: f64| mat2_scale(&mat2_transpose(&sys.generator_unchecked(t)), -1.0);
    let mut y = IDENTITY2;
    let mut log_u = 0.0;
    for k in 0..steps {
        let s = from + h * k as f64;
        let (t1, t2) = (s + GAUSS[0] * h, s + GAUSS[1] * h);
        let (a1, a2) = (a_at(t1), a_at(t2));
        let omega = mat2_add(
            &mat2_scale(&mat2_add(&a1, &a2), 0.5 * h),
            &mat2_scale(&commutator(&a1, &a2), -SQRT3 * h * h / 12.0),
        );
        y = mat2_mul(&mat2_expm(&omega), &y);
        log_u += 0.5 * h * (mat2_trace(&a1) + mat2_trace(&a2));
    }
    Ok(Flow { y, u: libm::exp(log_u) })
}

/// `Φ(t)` from `Φ(T)`: `φ` constant, `φ_a(t) = U(t,T)^b_a φ_b(T)`,
/// `φ̄(t) = u(t,T) φ̄(T)`.
pub fn evolve(sys: &TwoBitSystem, state: &StateFunction, t_from: f64, t_to: f64) -> Result<StateFunction> {
    Ok(flow(sys, t_from, t_to)?.apply(state))
}

/// `U(t, T)` in the index convention `φ_a(t) = U^b_a φ_b(T)`, stored as `u[b][a]`.
pub fn propagator_u(sys: &TwoBitSystem, t: f64, t_ref: f64) -> Result<Mat2> {
    Ok(flow(sys, t_ref, t)?.u_matrix())
}

/// `cos α · 1 + √(det η) sin α · η⁻¹ε` with `α = (t − T) H / (2√det η)`:
/// the constant-coefficient `U(T, t)`.
pub fn closed_form_u(h: f64, eta: &Mat2, t_ref: f64, t: f64) -> Result<Mat2> {
    let det = mat2_det(eta);
    if det <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let root = libm::sqrt(det);
    let alpha = (t - t_ref) * h / (2.0 * root);
    let rot = mat2_mul(&mat2_inverse(eta)?, &EPSILON2);
    Ok(mat2_add(&mat2_scale(&IDENTITY2, libm::cos(alpha)), &mat2_scale(&rot, root * libm::sin(alpha))))
}

/// Components `(x, x_a, χ)` of `X = x + x_a θᵃ − (i/2) χ ε_ab θᵃθᵇ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    pub x: f64,
    pub x_a: [f64; 2],
    pub chi: f64,
}

impl Observable {
    pub const fn new(x: f64, x_a: [f64; 2], chi: f64) -> Self {
        Self { x, x_a, chi }
    }

    pub fn constant(x: f64) -> Self {
        Self::new(x, [0.0; 2], 0.0)
    }

    pub fn to_multivector(&self) -> Multivector {
        StateFunction::new(self.x, self.x_a, self.chi).to_multivector()
    }

    pub fn from_multivector(f: &Multivector) -> Result<Self> {
        let s = StateFunction::from_multivector(f)?;
        Ok(Self::new(s.phi, s.phi_a, s.phibar))
    }
}

/// A time-dependent observable `t ↦ (x, x_a, χ)(t)`.
#[derive(Clone)]
pub struct ObservablePath(Arc<dyn Fn(f64) -> Observable + Send + Sync>);

impl fmt::Debug for ObservablePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("ObservablePath(..)")
    }
}

impl ObservablePath {
    pub fn new(f: impl Fn(f64) -> Observable + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    pub fn constant(x: Observable) -> Self {
        Self::new(move |_| x)
    }

    pub fn at(&self, t: f64) -> Observable {
        (self.0)(t)
    }

    /// Fourth-order central difference with step `h`.
    pub fn derivative(&self, t: f64, h: f64) -> Observable {
        let p = [self.at(t - 2.0 * h), self.at(t - h), self.at(t + h), self.at(t + 2.0 * h)];
        let d = |f: &dyn Fn(&Observable) -> f64| (f(&p[0]) - 8.0 * f(&p[1]) + 8.0 * f(&p[2]) - f(&p[3])) / (12.0 * h);
        Observable::new(d(&|o| o.x), [d(&|o| o.x_a[0]), d(&|o| o.x_a[1])], d(&|o| o.chi))
    }
}

/// `⟨X⟩ = x + 2φ(φ_a η^{ab} x_b + det⁻¹η φ̄ χ) / (φ² + φ_a η^{ab} φ_b + det⁻¹η φ̄²)`
/// for coordinate-frame components and metric `η`.
pub fn expectation_with(eta: &Mat2, x: &Observable, state: &StateFunction) -> Result<f64> {
    let norm = state.norm(eta)?;
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let inv = mat2_inverse(eta)?;
    let v = mat2_mul_vec(&inv, &x.x_a);
    let cross = state.phi_a[0] * v[0] + state.phi_a[1] * v[1] + state.phibar * x.chi / mat2_det(eta);
    Ok(x.x + 2.0 * state.phi * cross / norm)
}

/// Expectation in the laboratory at time `t` of the state `Φ(t)`.
pub fn expectation_at(sys: &TwoBitSystem, x: &Observable, state: &StateFunction, t: f64) -> Result<f64> {
    expectation_with(&sys.eta_at(t)?, x, state)
}

/// `L_P X` at `t`: components `(x′, x_a′ + M^b_a x_b, χ′ + tr M χ)`.
pub fn lie_derivative(sys: &TwoBitSystem, x: &ObservablePath, t: f64) -> Result<Observable> {
    let m = sys.generator_m(t)?;
    let value = x.at(t);
    let d = x.derivative(t, 1e-3);
    let mt = mat2_mul_vec(&mat2_transpose(&m), &value.x_a);
    Ok(Observable::new(d.x, [d.x_a[0] + mt[0], d.x_a[1] + mt[1]], d.chi + mat2_trace(&m) * value.chi))
}

/// `(d⟨X⟩/dt, ⟨L_P X⟩)` at `t` for the state evolved from `(T, Φ(T))`.
/// The left side is a fourth-order central difference of step `h_fd`.
pub fn expectation_rate_check(
    sys: &TwoBitSystem,
    x: &ObservablePath,
    state_ref: &StateFunction,
    t_ref: f64,
    t: f64,
    h_fd: f64,
) -> Result<(f64, f64)> {
    let value = |s: f64| -> Result<f64> {
        let st = evolve(sys, state_ref, t_ref, s)?;
        expectation_at(sys, &x.at(s), &st, s)
    };
    let lhs = (value(t - 2.0 * h_fd)? - 8.0 * value(t - h_fd)? + 8.0 * value(t + h_fd)? - value(t + 2.0 * h_fd)?)
        / (12.0 * h_fd);
    let st = evolve(sys, state_ref, t_ref, t)?;
    let rhs = expectation_at(sys, &lie_derivative(sys, x, t)?, &st, t)?;
    Ok((lhs, rhs))
}

/// Right-hand side of the equations of motion:
/// `(φ′, φ_a′, φ̄′) = (0, −M^b_a φ_b, −tr M φ̄)`.
pub fn equations_of_motion(sys: &TwoBitSystem, state: &StateFunction, t: f64) -> Result<StateFunction> {
    let m = sys.generator_m(t)?;
    let v = mat2_mul_vec(&mat2_transpose(&m), &state.phi_a);
    Ok(StateFunction::new(0.0, [-v[0], -v[1]], -mat2_trace(&m) * state.phibar))
}

/// Largest residual of the equations of motion along a sampled trajectory,
/// using centered differences at interior samples, relative to
/// `max(1, ‖Φ‖)`.
pub fn liouville_residual(sys: &TwoBitSystem, trajectory: &[(f64, StateFunction)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for w in trajectory.windows(3) {
        let ((ta, a), (t, s), (tb, b)) = (w[0], w[1], w[2]);
        let dt = tb - ta;
        if dt == 0.0 {
            continue;
        }
        let rhs = equations_of_motion(sys, &s, t)?.as_array();
        let (a, b) = (a.as_array(), b.as_array());
        let scale = s.max_abs().max(1.0);
        for k in 0..4 {
            worst = worst.max(((b[k] - a[k]) / dt - rhs[k]).abs() / scale);
        }
    }
    Ok(worst)
}

/// Samples `Φ` at the given increasing times, integrating sequentially
/// from `(times[0], initial)`.
pub fn trajectory(sys: &TwoBitSystem, initial: &StateFunction, times: &[f64]) -> Result<Vec<(f64, StateFunction)>> {
    let mut out = Vec::with_capacity(times.len());
    let Some(&first) = times.first() else { return Ok(out) };
    sys.check_time(first)?;
    let mut current = *initial;
    let mut t_prev = first;
    for &t in times {
        current = evolve(sys, &current, t_prev, t)?;
        out.push((t, current));
        t_prev = t;
    }
    Ok(out)
}
