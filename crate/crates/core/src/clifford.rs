//! Gamma-matrix representations and the Clifford map `σ`.
//!
//! Gammas come from the Jordan–Wigner ladder on `⌊m/2⌋` qubits:
//! `γ_{2j-1} = σz ⊗ … ⊗ σz ⊗ σx ⊗ 1 ⊗ …`, `γ_{2j} = σz ⊗ … ⊗ σz ⊗ σy ⊗ 1 ⊗ …`,
//! and for odd `m` the extra `γ_m = σz ⊗ … ⊗ σz`. Every ordered product of
//! gammas is a monomial matrix (one nonzero per row), which is how the
//! `2ᵐ` blade images are cached.

use alloc::vec;
use alloc::vec::Vec;

use crate::grassmann::{dagger_sign, Multivector, MAX_GENERATORS};
use crate::linalg::ComplexMatrix;
use crate::{re, Error, Result, Scalar, I};

/// A matrix with exactly one nonzero entry per row: row `i` holds
/// `phase[i]` in column `perm[i]`.
#[derive(Debug, Clone, PartialEq)]
struct Monomial {
    perm: Vec<usize>,
    phase: Vec<Scalar>,
}

impl Monomial {
    fn identity(d: usize) -> Self {
        Self { perm: (0..d).collect(), phase: vec![re(1.0); d] }
    }

    fn pauli_x() -> Self {
        Self { perm: vec![1, 0], phase: vec![re(1.0), re(1.0)] }
    }

    fn pauli_y() -> Self {
        Self { perm: vec![1, 0], phase: vec![-I, I] }
    }

    fn pauli_z() -> Self {
        Self { perm: vec![0, 1], phase: vec![re(1.0), re(-1.0)] }
    }

    fn kron(&self, other: &Self) -> Self {
        let b = other.perm.len();
        let d = self.perm.len() * b;
        let mut perm = Vec::with_capacity(d);
        let mut phase = Vec::with_capacity(d);
        for i in 0..d {
            let (i1, i2) = (i / b, i % b);
            perm.push(self.perm[i1] * b + other.perm[i2]);
            phase.push(self.phase[i1] * other.phase[i2]);
        }
        Self { perm, phase }
    }

    fn mul(&self, other: &Self) -> Self {
        let perm = self.perm.iter().map(|&k| other.perm[k]).collect();
        let phase = self
            .phase
            .iter()
            .zip(&self.perm)
            .map(|(p, &k)| p * other.phase[k])
            .collect();
        Self { perm, phase }
    }

    fn to_dense(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.perm.len());
        for (i, (&j, &p)) in self.perm.iter().zip(&self.phase).enumerate() {
            out[(i, j)] = p;
        }
        out
    }
}

/// `m` hermitean anticommuting `D × D` matrices, `D = 2^⌊m/2⌋`, together
/// with the images of all `2ᵐ` ordered blades.
#[derive(Debug, Clone)]
pub struct GammaRep {
    m: usize,
    dim: usize,
    blades: Vec<Monomial>,
}

/// Builds the Jordan–Wigner gamma representation for `1 ≤ m ≤ 12`.
pub fn build_gammas(m: usize) -> Result<GammaRep> {
    GammaRep::new(m)
}

impl GammaRep {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > MAX_GENERATORS {
            return Err(Error::GeneratorCount(m));
        }
        let qubits = m / 2;
        let dim = 1usize << qubits;
        let string = |ops: &mut dyn FnMut(usize) -> Monomial| {
            (0..qubits).fold(Monomial::identity(1), |acc, q| acc.kron(&ops(q)))
        };
        let mut gammas = Vec::with_capacity(m);
        for j in 0..qubits {
            for flip in [Monomial::pauli_x(), Monomial::pauli_y()] {
                gammas.push(string(&mut |q| {
                    if q < j {
                        Monomial::pauli_z()
                    } else if q == j {
                        flip.clone()
                    } else {
                        Monomial::identity(2)
                    }
                }));
            }
        }
        if m % 2 == 1 {
            gammas.push(string(&mut |_| Monomial::pauli_z()));
        }
        let mut blades = Vec::with_capacity(1 << m);
        blades.push(Monomial::identity(dim));
        for mask in 1usize..(1 << m) {
            // drop the highest generator: Γ_M = Γ_{M∖top} γ_top keeps increasing order
            let top = usize::BITS - 1 - mask.leading_zeros();
            let rest = mask & !(1 << top);
            let blade = blades[rest].mul(&gammas[top as usize]);
            blades.push(blade);
        }
        Ok(Self { m, dim, blades })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Matrix dimension `D`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `γ^{a+1}` as a dense matrix (zero-based `a`).
    pub fn gamma(&self, a: usize) -> ComplexMatrix {
        self.blades[1 << a].to_dense()
    }

    pub fn gammas(&self) -> Vec<ComplexMatrix> {
        (0..self.m).map(|a| self.gamma(a)).collect()
    }

    /// `γ^{a₁}⋯γ^{a_k}` for the generators of `mask` in increasing order.
    pub fn blade_matrix(&self, mask: u32) -> ComplexMatrix {
        self.blades[mask as usize].to_dense()
    }

    /// The Clifford map `σ`, extended linearly from ordered monomials.
    pub fn sigma(&self, f: &Multivector) -> Result<CliffordElement> {
        self.check(f)?;
        let mut out = ComplexMatrix::zeros(self.dim);
        for (mask, c) in f.terms() {
            let blade = &self.blades[mask as usize];
            for (i, (&j, &p)) in blade.perm.iter().zip(&blade.phase).enumerate() {
                out[(i, j)] += c * p;
            }
        }
        Ok(CliffordElement { matrix: out })
    }

    /// `σ⁻¹` by trace orthogonality `tr(Γ_M† Γ_N) = D δ_MN` (even `m` only).
    pub fn sigma_inverse(&self, x: &CliffordElement) -> Result<Multivector> {
        self.require_even()?;
        if x.matrix.n() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: x.matrix.n() });
        }
        let d = self.dim as f64;
        let coeffs = self
            .blades
            .iter()
            .map(|blade| {
                let tr: Scalar = blade
                    .perm
                    .iter()
                    .zip(&blade.phase)
                    .enumerate()
                    .map(|(i, (&j, p))| p.conj() * x.matrix[(i, j)])
                    .sum();
                tr / d
            })
            .collect();
        Multivector::from_coeffs(self.m, coeffs)
    }

    /// `F ⋆ G = σ⁻¹(σ(F) σ(G))`.
    pub fn star(&self, f: &Multivector, g: &Multivector) -> Result<Multivector> {
        self.require_even()?;
        let prod = self.sigma(f)?.matrix.mul(&self.sigma(g)?.matrix);
        self.sigma_inverse(&CliffordElement { matrix: prod })
    }

    /// `(F, G) = tr(σ(F) σ(G)) / D`.
    pub fn trace_inner(&self, f: &Multivector, g: &Multivector) -> Result<Scalar> {
        self.require_even()?;
        let (sf, sg) = (self.sigma(f)?.matrix, self.sigma(g)?.matrix);
        let d = self.dim;
        let mut tr = re(0.0);
        for i in 0..d {
            for k in 0..d {
                tr += sf[(i, k)] * sg[(k, i)];
            }
        }
        Ok(tr / d as f64)
    }

    /// Hermitean `S` with `S ⋆ S = Ψ`, when `σ(Ψ)` is positive semidefinite
    /// (even `m` only).
    pub fn star_sqrt(&self, psi: &Multivector, tol: f64) -> Result<Multivector> {
        self.require_even()?;
        let root = self.sigma(psi)?.matrix.hermitian_sqrt(tol)?;
        self.sigma_inverse(&CliffordElement { matrix: root })
    }

    /// Whether `σ(Ψ)` is Hermitian positive semidefinite, i.e. `Ψ` is a star
    /// square of a hermitean field. Works for any `m` the representation
    /// supports; for odd `m` `σ` is still a homomorphism, just not injective.
    pub fn is_positive(&self, psi: &Multivector, tol: f64) -> Result<bool> {
        let s = self.sigma(psi)?.matrix;
        let scale = s.as_slice().iter().fold(1.0f64, |m, z| m.max(z.norm()));
        if !s.is_hermitian(tol * scale) {
            return Ok(false);
        }
        let lowest = s.hermitian_eigenvalues().first().copied().unwrap_or(0.0);
        Ok(lowest >= -tol * scale)
    }

    fn check(&self, f: &Multivector) -> Result<()> {
        if f.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: f.m() });
        }
        Ok(())
    }

    fn require_even(&self) -> Result<()> {
        if self.m % 2 == 1 {
            return Err(Error::UnsupportedRepresentation { m: self.m });
        }
        Ok(())
    }
}

/// A `D × D` matrix in the image of `σ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CliffordElement {
    pub matrix: ComplexMatrix,
}

impl CliffordElement {
    pub fn dim(&self) -> usize {
        self.matrix.n()
    }
}

pub fn sigma(f: &Multivector, rep: &GammaRep) -> Result<CliffordElement> {
    rep.sigma(f)
}

pub fn star_matrix(f: &Multivector, g: &Multivector, rep: &GammaRep) -> Result<Multivector> {
    rep.star(f, g)
}

pub fn trace_inner(f: &Multivector, g: &Multivector, rep: &GammaRep) -> Result<Scalar> {
    rep.trace_inner(f, g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SoulBound {
    /// `‖𝒰‖²` with `𝒰 = F⋆F/‖F‖² − 1`.
    pub lhs: f64,
    /// `(√D + 1)² − 1/5`.
    pub rhs: f64,
    pub ok: bool,
}

/// Checks `‖F⋆F/‖F‖² − 1‖² ≤ (√D + 1)² − 1/5` for hermitean `F ≠ 0`.
pub fn soul_norm_bound_check(f: &Multivector, rep: &GammaRep) -> Result<SoulBound> {
    rep.require_even()?;
    if !f.is_hermitean_within(1e-12 * f.max_abs().max(1.0)) {
        return Err(Error::NotHermitean);
    }
    let norm2 = rep.trace_inner(f, f)?.re;
    if norm2 <= 0.0 || f.is_zero() {
        return Err(Error::ZeroNorm);
    }
    let mut u = rep.star(f, f)?.scale(re(1.0 / norm2));
    u.coeffs_mut()[0] -= re(1.0);
    let lhs = rep.trace_inner(&u, &u)?.re;
    let root = libm::sqrt(rep.dim() as f64);
    let rhs = (root + 1.0) * (root + 1.0) - 0.2;
    Ok(SoulBound { lhs, rhs, ok: lhs <= rhs + 1e-10 })
}

/// Sign relating the coefficient `c_M` of a hermitean field to the real
/// component `f_M` used in trace inner products: `c_M = f_M` for
/// `⌊k/2⌋` even and `c_M = −i f_M` for `⌊k/2⌋` odd.
pub fn hermitean_phase(grade: u32) -> Scalar {
    if dagger_sign(grade) > 0.0 {
        re(1.0)
    } else {
        -I
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rep_dimensions() {
        for m in 1..=12 {
            let rep = build_gammas(m).unwrap();
            assert_eq!(rep.dim(), 1 << (m / 2));
        }
        assert!(build_gammas(0).is_err());
        assert!(build_gammas(13).is_err());
    }

    #[test]
    fn m1_is_trivial() {
        let rep = build_gammas(1).unwrap();
        assert_eq!(rep.gamma(0), ComplexMatrix::identity(1));
    }

    #[test]
    fn odd_m_star_unsupported() {
        let rep = build_gammas(3).unwrap();
        let one = Multivector::one(3);
        assert_eq!(rep.star(&one, &one).unwrap_err(), Error::UnsupportedRepresentation { m: 3 });
    }

    #[test]
    fn blade_products_match_dense_products() {
        let rep = build_gammas(5).unwrap();
        let dense = rep.gamma(0).mul(&rep.gamma(2)).mul(&rep.gamma(4));
        assert!(rep.blade_matrix(0b10101).max_abs_diff(&dense) < 1e-15);
    }
}
