//! Dense exterior algebra over the complex numbers.
//!
//! A [`Multivector`] with `m` generators stores `2ᵐ` coefficients indexed by
//! bitmask: bit `a` set means the generator `θᵃ⁺¹` occurs. Basis monomials are
//! always taken in increasing generator order, `θ^{a₁}⋯θ^{a_k}` with
//! `a₁ < … < a_k`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::{re, Error, Result, Scalar};

/// Largest supported generator count (4096 coefficients).
pub const MAX_GENERATORS: usize = 12;

/// Sign of the product of the ordered blades `a` and `b`, or `None` when they
/// share a generator.
///
/// The sign is `(-1)^s` with `s` the number of transpositions needed to move
/// every generator of `b` past the larger generators of `a`.
#[inline]
pub fn blade_product_sign(a: u32, b: u32) -> Option<f64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let bit = rest.trailing_zeros();
        swaps += (a >> (bit + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps % 2 == 0 { 1.0 } else { -1.0 })
}

/// `(-1)^⌊k/2⌋`, the grade sign of the dagger involution.
#[inline]
pub fn dagger_sign(grade: u32) -> f64 {
    if (grade / 2) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Multivector {
    m: usize,
    coeffs: Vec<Scalar>,
}

impl Multivector {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_GENERATORS, "at most {MAX_GENERATORS} generators");
        Self {
            m,
            coeffs: vec![Scalar::new(0.0, 0.0); 1 << m],
        }
    }

    pub fn try_zero(m: usize) -> Result<Self> {
        if m > MAX_GENERATORS {
            return Err(Error::GeneratorCount(m));
        }
        Ok(Self::zero(m))
    }

    pub fn scalar(m: usize, value: Scalar) -> Self {
        let mut out = Self::zero(m);
        out.coeffs[0] = value;
        out
    }

    pub fn one(m: usize) -> Self {
        Self::scalar(m, re(1.0))
    }

    /// The generator `θ^{index+1}` (zero-based index).
    pub fn generator(m: usize, index: usize) -> Self {
        assert!(index < m, "generator index {index} out of range for m = {m}");
        Self::blade(m, 1 << index, re(1.0))
    }

    /// `value · θ^{mask}` with the generators of `mask` in increasing order.
    pub fn blade(m: usize, mask: u32, value: Scalar) -> Self {
        let mut out = Self::zero(m);
        assert!((mask as usize) < out.coeffs.len(), "mask out of range");
        out.coeffs[mask as usize] = value;
        out
    }

    pub fn from_coeffs(m: usize, coeffs: Vec<Scalar>) -> Result<Self> {
        if m > MAX_GENERATORS {
            return Err(Error::GeneratorCount(m));
        }
        if coeffs.len() != 1 << m {
            return Err(Error::DimensionMismatch {
                expected: 1 << m,
                found: coeffs.len(),
            });
        }
        Ok(Self { m, coeffs })
    }

    /// Builds a multivector from `(mask, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(m: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Scalar)>,
    {
        let mut out = Self::try_zero(m)?;
        for (mask, c) in terms {
            if (mask as usize) >= out.coeffs.len() {
                return Err(Error::InvalidArgument("blade mask exceeds generator count"));
            }
            out.coeffs[mask as usize] += c;
        }
        Ok(out)
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Scalar] {
        &mut self.coeffs
    }

    #[inline]
    pub fn coeff(&self, mask: u32) -> Scalar {
        self.coeffs[mask as usize]
    }

    #[inline]
    pub fn set_coeff(&mut self, mask: u32, value: Scalar) {
        self.coeffs[mask as usize] = value;
    }

    #[inline]
    pub fn top_mask(&self) -> u32 {
        ((1u64 << self.m) - 1) as u32
    }

    /// Nonzero terms as `(mask, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (u32, Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.re != 0.0 || c.im != 0.0)
            .map(|(mask, c)| (mask as u32, *c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms().next().is_none()
    }

    pub fn body(&self) -> Scalar {
        self.coeffs[0]
    }

    pub fn soul(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = re(0.0);
        out
    }

    /// The grade-`k` component.
    pub fn grade(&self, k: usize) -> Result<Self> {
        if k > self.m {
            return Err(Error::GradeOutOfRange { grade: k, m: self.m });
        }
        let mut out = Self::zero(self.m);
        for (mask, c) in self.coeffs.iter().enumerate() {
            if (mask as u32).count_ones() as usize == k {
                out.coeffs[mask] = *c;
            }
        }
        Ok(out)
    }

    /// Highest grade carrying a nonzero coefficient; `None` for zero.
    pub fn max_grade(&self) -> Option<usize> {
        self.terms().map(|(mask, _)| mask.count_ones() as usize).max()
    }

    /// Parity of a homogeneous element: `Some(0)` even, `Some(1)` odd,
    /// `None` for mixed parity. Zero counts as even.
    pub fn parity(&self) -> Option<u32> {
        let mut parity = None;
        for (mask, _) in self.terms() {
            let p = mask.count_ones() % 2;
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(parity.unwrap_or(0))
    }

    /// Graded-commutative product.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.product_unchecked(other))
    }

    pub(crate) fn product_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.m);
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                if let Some(sign) = blade_product_sign(a, b) {
                    out.coeffs[(a | b) as usize] += ca * cb * sign;
                }
            }
        }
        out
    }

    /// `F† = ⊕ (-1)^⌊k/2⌋ F*_k`.
    pub fn dagger(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, c)| c.conj() * dagger_sign((mask as u32).count_ones()))
            .collect();
        Self { m: self.m, coeffs }
    }

    /// Exact coefficient-wise comparison of `F` and `F†`.
    pub fn is_hermitean(&self) -> bool {
        self.dagger() == *self
    }

    /// Hermiticity up to an absolute tolerance.
    pub fn is_hermitean_within(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.dagger()) <= tol
    }

    /// Berezin integral `∂/∂θᵐ ⋯ ∂/∂θ¹ F`: the coefficient of `θ¹θ²⋯θᵐ`.
    pub fn berezin(&self) -> Scalar {
        self.coeffs[self.top_mask() as usize]
    }

    /// Left derivative `∂/∂θ^{a+1}` (zero-based `a`).
    pub fn left_derivative(&self, a: usize) -> Self {
        let bit = 1u32 << a;
        let mut out = Self::zero(self.m);
        for (mask, c) in self.terms() {
            if mask & bit != 0 {
                let before = (mask & (bit - 1)).count_ones();
                let sign = if before % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[(mask ^ bit) as usize] += c * sign;
            }
        }
        out
    }

    /// Right derivative `F ←∂/∂θ^{a+1}` (zero-based `a`).
    pub fn right_derivative(&self, a: usize) -> Self {
        let bit = 1u32 << a;
        let mut out = Self::zero(self.m);
        for (mask, c) in self.terms() {
            if mask & bit != 0 {
                let after = (mask >> (a + 1)).count_ones();
                let sign = if after % 2 == 0 { 1.0 } else { -1.0 };
                out.coeffs[(mask ^ bit) as usize] += c * sign;
            }
        }
        out
    }

    /// Image under the algebra automorphism fixed by `θᵃ ↦ Σ_b images[a][b] θᵇ`
    /// (row-major `m × m`).
    pub fn substitute_generators(&self, images: &[f64]) -> Result<Self> {
        if images.len() != self.m * self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m * self.m,
                found: images.len(),
            });
        }
        let gens: Vec<Self> = (0..self.m)
            .map(|a| {
                let mut g = Self::zero(self.m);
                for b in 0..self.m {
                    g.coeffs[1 << b] = re(images[a * self.m + b]);
                }
                g
            })
            .collect();
        let mut out = Self::zero(self.m);
        for (mask, c) in self.terms() {
            let mut mono = Self::one(self.m);
            let mut rest = mask;
            while rest != 0 {
                let a = rest.trailing_zeros() as usize;
                mono = mono.product_unchecked(&gens[a]);
                rest &= rest - 1;
            }
            out.add_scaled(&mono, c);
        }
        Ok(out)
    }

    /// The same element viewed inside `Λ` with `m + extra` generators.
    pub fn embed(&self, extra: usize) -> Result<Self> {
        let mut out = Self::try_zero(self.m + extra)?;
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        Ok(out)
    }

    /// Restriction to the first `m` generators; fails if dropped generators occur.
    pub fn restrict(&self, m: usize) -> Result<Self> {
        if m > self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: m });
        }
        let keep = 1usize << m;
        if self.coeffs[keep..].iter().any(|c| c.norm() > 0.0) {
            return Err(Error::InvalidArgument("element uses generators beyond the restriction"));
        }
        Self::from_coeffs(m, self.coeffs[..keep].to_vec())
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self {
            m: self.m,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: Scalar) {
        assert_eq!(self.m, other.m, "generator count mismatch");
        for (x, y) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *x += y * c;
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.m, other.m, "generator count mismatch");
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.m == other.m && self.max_abs_diff(other) <= tol
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: other.m,
            });
        }
        Ok(())
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for Multivector {
    type Output = Multivector;
    fn add(mut self, rhs: Multivector) -> Multivector {
        self += &rhs;
        self
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for Multivector {
    type Output = Multivector;
    fn sub(mut self, rhs: Multivector) -> Multivector {
        self -= &rhs;
        self
    }
}

impl AddAssign<&Multivector> for Multivector {
    fn add_assign(&mut self, rhs: &Multivector) {
        self.add_scaled(rhs, re(1.0));
    }
}

impl SubAssign<&Multivector> for Multivector {
    fn sub_assign(&mut self, rhs: &Multivector) {
        self.add_scaled(rhs, re(-1.0));
    }
}

impl Neg for Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        self.scale(re(-1.0))
    }
}

impl Mul<Scalar> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Scalar) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(re(rhs))
    }
}

impl Mul<Scalar> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: Scalar) -> Multivector {
        self.scale(rhs)
    }
}

impl Mul<f64> for Multivector {
    type Output = Multivector;
    fn mul(self, rhs: f64) -> Multivector {
        self.scale(re(rhs))
    }
}

/// Graded-commutative product. Panics when the generator counts differ; use
/// [`Multivector::product`] for a checked version.
impl Mul for &Multivector {
    type Output = Multivector;
    fn mul(self, rhs: &Multivector) -> Multivector {
        self.product(rhs).expect("generator count mismatch")
    }
}
