//! Fiber measures, the vertical Moyal star and laboratory inner products.
//!
//! The vertical star on `Λ` with metric `η` is
//!
//! ```text
//! F ⋆ G = μ ∘ exp(P) (F ⊗ G),   P(F ⊗ G) = η^{ab} (F ←∂_a) ⊗ (∂_b G),
//! ```
//!
//! with a right derivative on the left factor and a left derivative on the
//! right factor. For `η = δ` and even `m` it agrees with the matrix product
//! of the Clifford representation.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::clifford::GammaRep;
use crate::grassmann::{blade_product_sign, Multivector};
use crate::linalg::RealMatrix;
use crate::superforms::{OmegaSplit, PointBlocks, SuperForm};
use crate::supermatrix::{even_sqrt, GrassmannMatrix};
use crate::{re, Error, Result, Scalar, I};

/// Tolerance for the positivity test in [`is_state`].
pub const STATE_TOL: f64 = 1e-10;

/// Real symmetric fiber metric `η_ab` at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMetric {
    eta: RealMatrix,
    inverse: RealMatrix,
}

impl FiberMetric {
    pub fn new(eta: RealMatrix) -> Result<Self> {
        if !eta.is_symmetric(1e-12 * eta.max_abs().max(1.0)) {
            return Err(Error::InvalidArgument("fiber metric must be symmetric"));
        }
        let inverse = eta.inverse()?;
        Ok(Self { eta, inverse })
    }

    pub fn identity(m: usize) -> Self {
        Self { eta: RealMatrix::identity(m), inverse: RealMatrix::identity(m) }
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        Self::new(RealMatrix::from_rows(rows)?)
    }

    /// Reads `η` off the `dθᵃdθᵇ` block of a split two-form at `x₀`, at
    /// `θ = 0`. With `hermitean` set the block is taken to be `i η_ab`.
    pub fn from_split(split: &OmegaSplit, x0: &[f64], hermitean: bool) -> Result<Self> {
        let e = PointBlocks::from_split(split, x0)?.e.body();
        let factor = if hermitean { -I } else { re(1.0) };
        let m = e.n();
        let mut eta = RealMatrix::zeros(m);
        for a in 0..m {
            for b in 0..m {
                let z = e[(a, b)] * factor;
                if z.im.abs() > 1e-12 * z.norm().max(1.0) {
                    return Err(Error::InvalidArgument("fiber metric block is not real"));
                }
                eta[(a, b)] = z.re;
            }
        }
        Self::new(eta)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.eta.n()
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.eta
    }

    /// `η^{ab}`.
    pub fn inverse(&self) -> &RealMatrix {
        &self.inverse
    }

    pub fn det(&self) -> f64 {
        self.eta.det()
    }

    pub fn is_positive_definite(&self) -> bool {
        self.eta.cholesky().is_ok()
    }

    /// `e` with `e eᵀ = η` (lower-triangular Cholesky factor).
    pub fn frame(&self) -> Result<RealMatrix> {
        self.eta.cholesky()
    }
}

/// A fiber over a fixed base point, with an orthonormal frame for `η`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laboratory {
    pub label: String,
    pub t: f64,
    metric: FiberMetric,
    frame: RealMatrix,
    frame_inv: RealMatrix,
}

impl Laboratory {
    pub fn new(label: impl Into<String>, t: f64, metric: FiberMetric) -> Result<Self> {
        let frame = metric.frame()?;
        let frame_inv = frame.inverse()?;
        Ok(Self { label: label.into(), t, metric, frame, frame_inv })
    }

    pub fn metric(&self) -> &FiberMetric {
        &self.metric
    }

    /// `e_a^ā` as `frame[(a, ā)]`, so that `θ^ā = e_a^ā θᵃ`.
    pub fn frame(&self) -> &RealMatrix {
        &self.frame
    }

    /// Rewrites `F(θ)` in the orthonormal coordinates `θ^ā`.
    pub fn to_frame(&self, f: &Multivector) -> Result<Multivector> {
        let m = self.metric.m();
        // θᵃ = (e⁻¹)_{ā a} θ^ā
        let images: Vec<f64> = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| self.frame_inv[(b, a)])
            .collect();
        f.substitute_generators(&images)
    }

    /// Inverse of [`Laboratory::to_frame`].
    pub fn from_frame(&self, f: &Multivector) -> Result<Multivector> {
        let m = self.metric.m();
        let images: Vec<f64> = (0..m)
            .flat_map(|a| (0..m).map(move |b| (a, b)))
            .map(|(a, b)| self.frame[(b, a)])
            .collect();
        f.substitute_generators(&images)
    }
}

fn check_metric(f: &Multivector, metric: &FiberMetric) -> Result<()> {
    if f.m() != metric.m() {
        return Err(Error::DimensionMismatch { expected: metric.m(), found: f.m() });
    }
    Ok(())
}

/// `(exp η⁻¹)(F, G)`.
pub fn vertical_star(f: &Multivector, g: &Multivector, metric: &FiberMetric) -> Result<Multivector> {
    let m = metric.m();
    let mut weights = Vec::with_capacity(m + 1);
    let mut w = 1.0;
    for k in 0..=m {
        if k > 0 {
            w /= k as f64;
        }
        weights.push(w);
    }
    vertical_star_weighted(f, g, metric, &weights)
}

/// `Σ_k c_k P^k (F ⊗ G)` multiplied out; `c_k = 1/k!` gives
/// [`vertical_star`]. Missing weights count as zero.
pub fn vertical_star_weighted(
    f: &Multivector,
    g: &Multivector,
    metric: &FiberMetric,
    weights: &[f64],
) -> Result<Multivector> {
    check_metric(f, metric)?;
    check_metric(g, metric)?;
    let m = metric.m();
    let inv = metric.inverse();
    let mut layer: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
    for (a, ca) in f.terms() {
        for (b, cb) in g.terms() {
            *layer.entry((a, b)).or_insert(re(0.0)) += ca * cb;
        }
    }
    let mut out = Multivector::zero(m);
    for &weight in weights {
        if layer.is_empty() {
            break;
        }
        for (&(a, b), c) in &layer {
            if let Some(sign) = blade_product_sign(a, b) {
                out.coeffs_mut()[(a | b) as usize] += c * (sign * weight);
            }
        }
        let mut next: BTreeMap<(u32, u32), Scalar> = BTreeMap::new();
        for (&(ma, mb), c) in &layer {
            for p in 0..m {
                let bp = 1u32 << p;
                if ma & bp == 0 {
                    continue;
                }
                // right derivative: generators after p
                let s_right = if (ma >> (p + 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                for q in 0..m {
                    let bq = 1u32 << q;
                    let eta_pq = inv[(p, q)];
                    if mb & bq == 0 || eta_pq == 0.0 {
                        continue;
                    }
                    // left derivative: generators before q
                    let s_left = if (mb & (bq - 1)).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                    *next.entry((ma ^ bp, mb ^ bq)).or_insert(re(0.0)) += c * (eta_pq * s_right * s_left);
                }
            }
        }
        next.retain(|_, c| c.re != 0.0 || c.im != 0.0);
        layer = next;
    }
    Ok(out)
}

pub fn star_square(f: &Multivector, metric: &FiberMetric) -> Result<Multivector> {
    vertical_star(f, f, metric)
}

/// `Θ = √(det η) θ¹⋯θᵐ`.
pub fn theta_volume(metric: &FiberMetric) -> Result<Multivector> {
    let det = metric.det();
    if det <= 0.0 {
        return Err(Error::NotPositiveDefinite);
    }
    let m = metric.m();
    Ok(Multivector::blade(m, ((1u64 << m) - 1) as u32, re(libm::sqrt(det))))
}

/// `∫ Ber Θ F ⋆ G` over the fiber of a laboratory, `Ber = (det η)^{-1/2}`.
pub fn lab_inner(f: &Multivector, g: &Multivector, lab: &Laboratory) -> Result<f64> {
    for x in [f, g] {
        if !x.is_hermitean_within(1e-12 * x.max_abs().max(1.0)) {
            return Err(Error::NotHermitean);
        }
    }
    Ok(fiber_integral(&vertical_star(f, g, lab.metric())?, lab.metric())?.re)
}

/// `∫ Ber Θ F` over the fiber.
pub fn fiber_integral(f: &Multivector, metric: &FiberMetric) -> Result<Scalar> {
    let theta = theta_volume(metric)?;
    check_metric(f, metric)?;
    Ok(theta.product(f)?.berezin() / libm::sqrt(metric.det()))
}

/// `⟨X⟩ = ∫ Φ⋆X⋆Φ / ∫ Φ⋆Φ`.
pub fn expectation(x: &Multivector, phi: &Multivector, lab: &Laboratory) -> Result<f64> {
    for f in [x, phi] {
        if !f.is_hermitean_within(1e-12 * f.max_abs().max(1.0)) {
            return Err(Error::NotHermitean);
        }
    }
    let metric = lab.metric();
    let norm = fiber_integral(&vertical_star(phi, phi, metric)?, metric)?.re;
    if norm <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let triple = vertical_star(&vertical_star(phi, x, metric)?, phi, metric)?;
    Ok(fiber_integral(&triple, metric)?.re / norm)
}

/// Whether `Ψ` is a star square of a hermitean field for the metric `η`
/// (positive definite). Decided by a Hermitian matrix test on the Clifford
/// image in an orthonormal frame; odd `m` is embedded into `m + 1`.
pub fn is_state(psi: &Multivector, metric: &FiberMetric) -> Result<bool> {
    check_metric(psi, metric)?;
    let scale = psi.max_abs().max(1.0);
    if !psi.is_hermitean_within(1e-12 * scale) {
        return Ok(false);
    }
    let m = metric.m();
    if m == 0 {
        return Ok(psi.body().re >= -STATE_TOL * scale);
    }
    let lab = Laboratory::new("", 0.0, metric.clone())?;
    let mut framed = lab.to_frame(psi)?;
    if m % 2 == 1 {
        framed = framed.embed(1)?;
    }
    let rep = GammaRep::new(framed.m())?;
    rep.is_positive(&framed, STATE_TOL)
}

/// Two-sided superdeterminant pair for the blocks of a split two-form.
#[derive(Debug, Clone, PartialEq)]
pub struct Superdeterminant {
    /// `det(ω − A η⁻¹ Aᵀ) / det η`.
    pub value: Multivector,
    /// `det ω / det(η − Aᵀ ω⁻¹ A)`, when `ω` is invertible.
    pub dual: Option<Multivector>,
}

fn divide(num: &Multivector, den: &Multivector) -> Result<Multivector> {
    let d = GrassmannMatrix::from_fn(1, 1, den.m(), |_, _| den.clone()).inverse()?;
    num.product(d.get(0, 0))
}

/// Superdeterminant of the even supermatrix `[[ω, A], [Aᵀ, η]]` built from
/// the coefficient blocks of `Ω` at `x₀`.
pub fn sdet(split: &OmegaSplit, x0: &[f64]) -> Result<Superdeterminant> {
    let blocks = PointBlocks::from_split(split, x0)?;
    sdet_blocks(&blocks)
}

pub fn sdet_blocks(blocks: &PointBlocks) -> Result<Superdeterminant> {
    let (w, a, e) = (&blocks.w, &blocks.a, &blocks.e);
    let at = a.transpose();
    let e_inv = e.inverse()?;
    let schur = w.sub(&a.mul(&e_inv)?.mul(&at)?)?;
    let value = divide(&schur.det()?, &e.det()?)?;
    let dual = match w.inverse() {
        Ok(w_inv) => {
            let schur = e.sub(&at.mul(&w_inv)?.mul(a)?)?;
            Some(divide(&w.det()?, &schur.det()?)?)
        }
        Err(Error::Singular) => None,
        Err(other) => return Err(other),
    };
    Ok(Superdeterminant { value, dual })
}

/// `∫ Ber(Ω) Θ(Ω) F` over a box in the base, by the trapezoid rule with
/// `resolution` nodes per axis. `Ber(Ω) Θ(Ω) = (sdet(Ω) det e)^{1/2} θ¹⋯θᵐ`
/// with `e` the `dθᵃdθᵇ` block as it stands; `f` is a 0-form.
pub fn superintegral(split: &OmegaSplit, f: &SuperForm, lo: &[f64], hi: &[f64], resolution: usize) -> Result<Scalar> {
    let (n, m) = (split.omega.n(), split.omega.m());
    if lo.len() != n || hi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: lo.len() });
    }
    if resolution < 2 {
        return Err(Error::InvalidArgument("trapezoid rule needs at least two nodes per axis"));
    }
    let zeros = vec![0u32; m];
    let top = Multivector::blade(m, ((1u64 << m) - 1) as u32, re(1.0));
    let h: Vec<f64> = lo.iter().zip(hi).map(|(a, b)| (b - a) / (resolution - 1) as f64).collect();
    let mut idx = vec![0usize; n];
    let mut total = re(0.0);
    loop {
        let x: Vec<f64> = (0..n).map(|i| lo[i] + h[i] * idx[i] as f64).collect();
        let weight: f64 = idx
            .iter()
            .zip(&h)
            .map(|(&k, &hk)| if k == 0 || k == resolution - 1 { 0.5 * hk } else { hk })
            .product();
        let blocks = PointBlocks::from_split(split, &x)?;
        // one root of the product: separate principal roots of sdet and
        // det e differ by a sign when det e < 0
        let density = sdet_blocks(&blocks)?.value.product(&blocks.e.det()?)?;
        let ber_theta = even_sqrt(&density)?.product(&top)?;
        let value = f.component_at(&x, 0, &zeros)?;
        let integrand = ber_theta.product(&value)?.berezin();
        total += integrand * weight;

        let mut axis = 0;
        loop {
            if axis == n {
                return Ok(total);
            }
            idx[axis] += 1;
            if idx[axis] < resolution {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

/// The four `m = 2` observables `ψᵢ` and their dual indicators
/// `Xᵢ = (ψᵢ + 2)/12`.
#[derive(Debug, Clone, PartialEq)]
pub struct Indicators {
    pub psi: [Multivector; 4],
    pub x: [Multivector; 4],
}

pub fn indicators_m2() -> Indicators {
    let s2 = libm::sqrt(2.0);
    let s6 = libm::sqrt(6.0);
    let s8 = libm::sqrt(8.0);
    let field = |f1: f64, f2: f64, f12: Scalar| {
        Multivector::from_terms(2, [(0, re(1.0)), (1, re(f1)), (2, re(f2)), (3, f12)]).expect("m = 2")
    };
    let psi = [
        field(s8, 0.0, I),
        field(-s2, s6, I),
        field(-s2, -s6, I),
        field(0.0, 0.0, Scalar::new(0.0, -3.0)),
    ];
    let x = psi.clone().map(|p| {
        let mut out = p.scale(re(1.0 / 12.0));
        out.coeffs_mut()[0] = re(3.0 / 12.0);
        out
    });
    Indicators { psi, x }
}
