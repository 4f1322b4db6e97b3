//! Kernel vectors of closed even two-forms, evaluated at a base point.
//!
//! At `x₀` write `Ω = ½ W_ij dxⁱdxʲ + a_ia dxⁱdθᵃ + e_ab dθᵃdθᵇ` with
//! `θ`-dependent coefficients placed to the left. For
//! `P = ρᵏ∂_k + ρᶜ∂_{θᶜ}` the contraction `ι_P Ω` vanishes iff
//!
//! ```text
//! ρᶜ = ρᵏ a_kb (E⁻¹)_bc,  E = 2e,
//! ρᵀ W̄ = 0,             W̄ = W + a E⁻¹ aᵀ,
//! ```
//!
//! and the second equation is solved by `ρᵀ = ρ₀ᵀ (1 + Ŵ W₀⁺)⁻¹` where
//! `W̄ = W₀ + Ŵ` splits off the body and `W₀⁺` is the pseudo-inverse with
//! image orthogonal to `ρ₀`.

use alloc::vec::Vec;

use super::{OmegaSplit, SuperForm};
use crate::grassmann::Multivector;
use crate::linalg::ComplexMatrix;
use crate::supermatrix::GrassmannMatrix;
use crate::{re, Error, Result};

/// The coefficient blocks of a split two-form at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct PointBlocks {
    /// `n × n`, antisymmetric, even entries.
    pub w: GrassmannMatrix,
    /// `n × m`, odd entries.
    pub a: GrassmannMatrix,
    /// `m × m`, symmetric, even entries.
    pub e: GrassmannMatrix,
}

fn unit_exponents(m: usize, a: usize, b: usize) -> Vec<u32> {
    let mut out = alloc::vec![0u32; m];
    out[a] += 1;
    out[b] += 1;
    out
}

impl PointBlocks {
    pub fn from_split(split: &OmegaSplit, x0: &[f64]) -> Result<Self> {
        let (n, m) = (split.omega.n(), split.omega.m());
        let zeros = alloc::vec![0u32; m];
        let mut w = GrassmannMatrix::zeros(n, n, m);
        for i in 0..n {
            for j in i + 1..n {
                let c = split.omega.component_at(x0, (1 << i) | (1 << j), &zeros)?;
                w.set(j, i, c.scale(re(-1.0)));
                w.set(i, j, c);
            }
        }
        let mut a = GrassmannMatrix::zeros(n, m, m);
        for i in 0..n {
            for b in 0..m {
                let mut e = zeros.clone();
                e[b] = 1;
                a.set(i, b, split.a.component_at(x0, 1 << i, &e)?);
            }
        }
        let mut e = GrassmannMatrix::zeros(m, m, m);
        for p in 0..m {
            for q in p..m {
                let c = split.eta.component_at(x0, 0, &unit_exponents(m, p, q))?;
                if p == q {
                    e.set(p, p, c);
                } else {
                    let half = c.scale(re(0.5));
                    e.set(p, q, half.clone());
                    e.set(q, p, half);
                }
            }
        }
        Ok(Self { w, a, e })
    }
}

/// `P = ρᵏ ∂/∂xᵏ + ρᶜ ∂/∂θᶜ` at one base point.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperVectorField {
    pub base: Vec<Multivector>,
    pub fiber: Vec<Multivector>,
}

impl SuperVectorField {
    /// `ι_P Ω` at `x₀`, computed term by term on the form.
    pub fn contract(&self, omega: &SuperForm, x0: &[f64]) -> Result<SuperForm> {
        if self.base.len() != omega.n() || self.fiber.len() != omega.m() {
            return Err(Error::DimensionMismatch { expected: omega.n(), found: self.base.len() });
        }
        let point = omega.evaluate_at(x0)?;
        let mut out = point.zero_like();
        for (k, rho) in self.base.iter().enumerate() {
            out = out.add(&point.interior_dx(k).left_mul_function(rho)?)?;
        }
        for (c, rho) in self.fiber.iter().enumerate() {
            out = out.add(&point.interior_dtheta(c).left_mul_function(rho)?)?;
        }
        Ok(out)
    }

    /// Whether every base component is even and every fiber component odd.
    pub fn is_even(&self) -> bool {
        self.base.iter().all(|r| r.parity() == Some(0)) && self.fiber.iter().all(|r| r.parity() == Some(1))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelLift {
    pub field: SuperVectorField,
    /// Largest coefficient of `ι_P Ω` at the base point.
    pub residual: f64,
}

/// Lifts a kernel vector `ρ₀` of `ω₀` at `x₀` to the kernel of the full
/// two-form.
pub fn kernel_lift(split: &OmegaSplit, x0: &[f64], rho0: &[f64]) -> Result<KernelLift> {
    let blocks = PointBlocks::from_split(split, x0)?;
    let (n, m) = (blocks.w.rows(), blocks.e.rows());
    if rho0.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: rho0.len() });
    }
    let norm2: f64 = rho0.iter().map(|r| r * r).sum();
    if norm2 == 0.0 {
        return Err(Error::ZeroNorm);
    }

    let e_inv = blocks.e.scale(re(2.0)).inverse()?;
    let w_bar = blocks.w.add(&blocks.a.mul(&e_inv)?.mul(&blocks.a.transpose())?)?;
    let w0 = w_bar.body();

    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(1.0f64, |s, (i, j)| s.max(w0[(i, j)].norm()));
    let residual = (0..n)
        .map(|j| (0..n).map(|i| w0[(i, j)] * rho0[i]).sum::<crate::Scalar>().norm())
        .fold(0.0, f64::max);
    if residual > 1e-12 * scale {
        return Err(Error::NotInKernel { residual });
    }

    // W₀⁺ = (W₀ + P)⁻¹ − P with P the orthogonal projector onto ρ₀
    let proj = ComplexMatrix::from_fn(n, |i, j| re(rho0[i] * rho0[j] / norm2));
    let w0_pinv = w0.add(&proj).inverse()?.add(&proj.scale(re(-1.0)));
    let w_hat = w_bar.sub(&GrassmannMatrix::from_complex(&w0, m))?;
    let resolvent = GrassmannMatrix::identity(n, m)
        .add(&w_hat.mul(&GrassmannMatrix::from_complex(&w0_pinv, m))?)?
        .inverse()?;

    let base: Vec<Multivector> = (0..n)
        .map(|k| {
            let mut acc = Multivector::zero(m);
            for (j, &r) in rho0.iter().enumerate() {
                acc.add_scaled(resolvent.get(j, k), re(r));
            }
            acc
        })
        .collect();
    let row = GrassmannMatrix::from_fn(1, n, m, |_, k| base[k].clone());
    let fiber_row = row.mul(&blocks.a)?.mul(&e_inv)?;
    let fiber = (0..m).map(|c| fiber_row.get(0, c).clone()).collect();

    let field = SuperVectorField { base, fiber };
    let omega = split.reassemble()?;
    let residual = field.contract(&omega, x0)?.max_abs();
    Ok(KernelLift { field, residual })
}
