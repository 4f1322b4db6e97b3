use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::linalg::{mat2_add, mat2_inverse, mat2_mul, mat2_scale, mat2_trace, mat2_transpose, Mat2, EPSILON2};
use crate::superforms::SuperForm;
use crate::{re, Error, Result, I};

/// Time-dependent fiber metric `η_ab(t)` of the two-bit system.
#[derive(Clone)]
pub enum EtaPath {
    Constant(Mat2),
    /// `e^{rate·t} · base`.
    ExpScale { base: Mat2, rate: f64 },
    /// `Σ_k coeffs[k] t^k`.
    Poly(Vec<Mat2>),
    /// Arbitrary smooth path; derivatives by fourth-order central differences.
    Custom(Arc<dyn Fn(f64) -> Mat2 + Send + Sync>),
}

/// Time-dependent Hamiltonian coefficient `H(t)`.
#[derive(Clone)]
pub enum ScalarPath {
    Constant(f64),
    /// `Σ_k coeffs[k] t^k`.
    Poly(Vec<f64>),
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

impl fmt::Debug for EtaPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(m) => f.debug_tuple("Constant").field(m).finish(),
            Self::ExpScale { base, rate } => f.debug_struct("ExpScale").field("base", base).field("rate", rate).finish(),
            Self::Poly(c) => f.debug_tuple("Poly").field(c).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl fmt::Debug for ScalarPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant(h) => f.debug_tuple("Constant").field(h).finish(),
            Self::Poly(c) => f.debug_tuple("Poly").field(c).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

const FD_STEP: f64 = 1e-3;

fn central_difference<T>(f: impl Fn(f64) -> T, t: f64, h: f64, combine: impl Fn(&[T; 4]) -> T) -> T {
    let pts = [f(t - 2.0 * h), f(t - h), f(t + h), f(t + 2.0 * h)];
    combine(&pts)
}

fn poly_eval(coeffs: &[f64], t: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

fn poly_derivative(coeffs: &[f64]) -> Vec<f64> {
    coeffs.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

fn entry(coeffs: &[Mat2], i: usize, j: usize) -> Vec<f64> {
    coeffs.iter().map(|c| c[i][j]).collect()
}

impl EtaPath {
    pub fn at(&self, t: f64) -> Mat2 {
        match self {
            Self::Constant(m) => *m,
            Self::ExpScale { base, rate } => mat2_scale(base, libm::exp(rate * t)),
            Self::Poly(c) => {
                let mut out = [[0.0; 2]; 2];
                for (i, row) in out.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = poly_eval(&entry(c, i, j), t);
                    }
                }
                out
            }
            Self::Custom(f) => f(t),
        }
    }

    pub fn derivative(&self, t: f64) -> Mat2 {
        match self {
            Self::Constant(_) => [[0.0; 2]; 2],
            Self::ExpScale { base, rate } => mat2_scale(base, rate * libm::exp(rate * t)),
            Self::Poly(c) => {
                let mut out = [[0.0; 2]; 2];
                for (i, row) in out.iter_mut().enumerate() {
                    for (j, v) in row.iter_mut().enumerate() {
                        *v = poly_eval(&poly_derivative(&entry(c, i, j)), t);
                    }
                }
                out
            }
            Self::Custom(f) => central_difference(|s| f(s), t, FD_STEP, |p| {
                let mut out = [[0.0; 2]; 2];
                for i in 0..2 {
                    for j in 0..2 {
                        out[i][j] = (p[0][i][j] - 8.0 * p[1][i][j] + 8.0 * p[2][i][j] - p[3][i][j]) / (12.0 * FD_STEP);
                    }
                }
                out
            }),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant(_) => true,
            Self::ExpScale { base, rate } => *rate == 0.0 || base.iter().flatten().all(|x| *x == 0.0),
            Self::Poly(c) => c.iter().skip(1).all(|m| m.iter().flatten().all(|x| *x == 0.0)),
            Self::Custom(_) => false,
        }
    }

    /// Polynomial coefficients, if the path is polynomial in `t`.
    pub fn polynomial(&self) -> Option<Vec<Mat2>> {
        match self {
            Self::Constant(m) => Some(vec![*m]),
            Self::Poly(c) => Some(c.clone()),
            Self::ExpScale { base, rate } if *rate == 0.0 => Some(vec![*base]),
            _ => None,
        }
    }
}

impl ScalarPath {
    pub fn at(&self, t: f64) -> f64 {
        match self {
            Self::Constant(h) => *h,
            Self::Poly(c) => poly_eval(c, t),
            Self::Custom(f) => f(t),
        }
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Self::Constant(_) => true,
            Self::Poly(c) => c.iter().skip(1).all(|x| *x == 0.0),
            Self::Custom(_) => false,
        }
    }

    pub fn polynomial(&self) -> Option<Vec<f64>> {
        match self {
            Self::Constant(h) => Some(vec![*h]),
            Self::Poly(c) => Some(c.clone()),
            Self::Custom(_) => None,
        }
    }
}

/// The two-bit super phase-spacetime `ℝ¹|²` with fiber metric `η(t)` and
/// Hamiltonian coefficient `H(t)` on `[t0, t1]`.
#[derive(Debug, Clone)]
pub struct TwoBitSystem {
    pub eta: EtaPath,
    pub h: ScalarPath,
    pub t0: f64,
    pub t1: f64,
    /// Integration step.
    pub step: f64,
}

/// Sample count used to validate `η(t)` and estimate `max |H|`.
const VALIDATION_SAMPLES: usize = 200;

/// Slack allowed at the ends of the time domain.
const DOMAIN_SLACK: f64 = 1e-9;

impl TwoBitSystem {
    /// Builds a system and checks that `η(t)` is symmetric positive definite
    /// on a uniform sample of the domain. A `step` of `None` selects
    /// `1e-3 · min(1, 1/max|H|)`.
    pub fn new(eta: EtaPath, h: ScalarPath, t0: f64, t1: f64, step: Option<f64>) -> Result<Self> {
        if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
            return Err(Error::InvalidArgument("time domain must satisfy t0 ≤ t1"));
        }
        let mut max_h = 0.0f64;
        for k in 0..=VALIDATION_SAMPLES {
            let t = t0 + (t1 - t0) * k as f64 / VALIDATION_SAMPLES as f64;
            let e = eta.at(t);
            if (e[0][1] - e[1][0]).abs() > 1e-12 * e[0][0].abs().max(1.0) {
                return Err(Error::InvalidArgument("fiber metric must be symmetric"));
            }
            if !(e[0][0] > 0.0 && e[0][0] * e[1][1] - e[0][1] * e[1][0] > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let hv = h.at(t);
            if !hv.is_finite() {
                return Err(Error::InvalidArgument("H(t) must be finite"));
            }
            max_h = max_h.max(hv.abs());
        }
        let step = match step {
            Some(s) if s > 0.0 && s.is_finite() => s,
            Some(_) => return Err(Error::InvalidArgument("step must be positive")),
            None => 1e-3 * if max_h > 1.0 { 1.0 / max_h } else { 1.0 },
        };
        Ok(Self { eta, h, t0, t1, step })
    }

    /// Constant `η` and `H` on `[t0, t1]` with the default step.
    pub fn constant(eta: Mat2, h: f64, t0: f64, t1: f64) -> Result<Self> {
        Self::new(EtaPath::Constant(eta), ScalarPath::Constant(h), t0, t1, None)
    }

    pub fn is_constant(&self) -> bool {
        self.eta.is_constant() && self.h.is_constant()
    }

    pub fn check_time(&self, t: f64) -> Result<()> {
        if t < self.t0 - DOMAIN_SLACK || t > self.t1 + DOMAIN_SLACK || t.is_nan() {
            return Err(Error::OutsideDomain { t, t0: self.t0, t1: self.t1 });
        }
        Ok(())
    }

    pub fn eta_at(&self, t: f64) -> Result<Mat2> {
        self.check_time(t)?;
        Ok(self.eta.at(t))
    }

    pub fn h_at(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        Ok(self.h.at(t))
    }

    /// `M^b_a = −½ η^{bc}(H ε_ac + η′_ca)`, stored as `m[b][a]`.
    pub fn generator_m(&self, t: f64) -> Result<Mat2> {
        self.check_time(t)?;
        Ok(self.generator_unchecked(t))
    }

    pub(crate) fn generator_unchecked(&self, t: f64) -> Mat2 {
        let eta_inv = mat2_inverse(&self.eta.at(t)).expect("η validated positive definite");
        let inner = mat2_add(&mat2_scale(&mat2_transpose(&EPSILON2), self.h.at(t)), &self.eta.derivative(t));
        mat2_scale(&mat2_mul(&eta_inv, &inner), -0.5)
    }

    /// `tr M = −½ η^{ab} η′_ab`.
    pub fn trace_m(&self, t: f64) -> Result<f64> {
        Ok(mat2_trace(&self.generator_m(t)?))
    }

    /// `Ω = d_T ξ` with `ξ = i η_ab θᵃ dθᵇ + (i/2) H ε_ab θᵃθᵇ dt` on `ℝ¹|²`,
    /// available when `η` and `H` are polynomial in `t`.
    pub fn omega_form(&self) -> Result<SuperForm> {
        let eta = self.eta.polynomial().ok_or(Error::InvalidArgument("η(t) is not polynomial"))?;
        let h = self.h.polynomial().ok_or(Error::InvalidArgument("H(t) is not polynomial"))?;
        let degree = eta.len().max(h.len());
        let mut xi = SuperForm::zero(1, 2)?.with_max_poly_degree(degree.max(crate::superforms::DEFAULT_MAX_POLY_DEGREE));
        for (k, c) in eta.iter().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    let mut dtheta = [0u32; 2];
                    dtheta[b] = 1;
                    xi = xi.with_term(&[k as u32], 1 << a, 0, &dtheta, I * c[a][b])?;
                }
            }
        }
        // (i/2) H ε_ab θᵃθᵇ dt = i H θ¹θ² dt
        for (k, c) in h.iter().enumerate() {
            xi = xi.with_term(&[k as u32], 0b11, 1, &[0, 0], I * re(*c))?;
        }
        xi.d_total()
    }
}
