//! Polynomial superdifferential forms on `ℝⁿ|ᵐ`.
//!
//! A term is `c · x^α θ^M dx^I dθ^β`, always stored in that order, with `θ`
//! and `dx` odd, `x` and `dθ` even. `α` and `β` are exponent vectors, `M` and
//! `I` bitmasks. The Grassmann parity of a term is `(|M| + |I|) mod 2` and
//! its bidegree is `(|I|, |β|)`.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::grassmann::{blade_product_sign, Multivector, MAX_GENERATORS};
use crate::{re, Error, Result, Scalar};

pub mod hodge;
pub mod lift;

pub use hodge::{
    dhat_partial_inverse, euler_inverse, hodge_decompose, reconstruct, split_omega, HodgeDecomposition, OmegaSplit,
    Quartet,
};
pub use lift::{kernel_lift, KernelLift, PointBlocks, SuperVectorField};

/// Largest supported base dimension.
pub const MAX_BASE_DIM: usize = 16;

/// Default cap on the total `dθ`-degree of a term.
pub const DEFAULT_TRUNCATION: usize = 4;

/// Default cap on the total `x`-degree of a coefficient polynomial.
pub const DEFAULT_MAX_POLY_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    /// `x`-exponents, length `n`.
    pub x: Vec<u32>,
    /// `θ` bitmask, bit `a` for `θ^{a+1}`.
    pub theta: u32,
    /// `dx` bitmask, bit `i` for `dx^{i+1}`.
    pub dx: u32,
    /// `dθ`-exponents, length `m`.
    pub dtheta: Vec<u32>,
}

impl TermKey {
    pub fn new(x: Vec<u32>, theta: u32, dx: u32, dtheta: Vec<u32>) -> Self {
        Self { x, theta, dx, dtheta }
    }

    /// The constant term `1` on `ℝⁿ|ᵐ`.
    pub fn unit(n: usize, m: usize) -> Self {
        Self { x: vec![0; n], theta: 0, dx: 0, dtheta: vec![0; m] }
    }

    pub fn poly_degree(&self) -> usize {
        self.x.iter().sum::<u32>() as usize
    }

    pub fn theta_degree(&self) -> usize {
        self.theta.count_ones() as usize
    }

    pub fn dx_degree(&self) -> usize {
        self.dx.count_ones() as usize
    }

    pub fn dtheta_degree(&self) -> usize {
        self.dtheta.iter().sum::<u32>() as usize
    }

    pub fn form_degree(&self) -> usize {
        self.dx_degree() + self.dtheta_degree()
    }

    pub fn parity(&self) -> u32 {
        (self.theta.count_ones() + self.dx.count_ones()) % 2
    }

    /// `θ`-degree plus `dθ`-degree: the eigenvalue of `{d̂, θᵃ∂/∂dθᵃ}`.
    pub fn weight(&self) -> usize {
        self.theta_degree() + self.dtheta_degree()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuperForm {
    n: usize,
    m: usize,
    truncation: usize,
    max_poly_degree: usize,
    terms: BTreeMap<TermKey, Scalar>,
}

#[inline]
fn sign_of(count: u32) -> f64 {
    if count % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

impl SuperForm {
    pub fn zero(n: usize, m: usize) -> Result<Self> {
        if n > MAX_BASE_DIM {
            return Err(Error::InvalidArgument("base dimension exceeds 16"));
        }
        if m > MAX_GENERATORS {
            return Err(Error::GeneratorCount(m));
        }
        Ok(Self {
            n,
            m,
            truncation: DEFAULT_TRUNCATION,
            max_poly_degree: DEFAULT_MAX_POLY_DEGREE,
            terms: BTreeMap::new(),
        })
    }

    pub fn with_truncation(mut self, s: usize) -> Self {
        self.truncation = s;
        self
    }

    pub fn with_max_poly_degree(mut self, degree: usize) -> Self {
        self.max_poly_degree = degree;
        self
    }

    /// Zero form with the same dimensions and limits.
    pub fn zero_like(&self) -> Self {
        Self { terms: BTreeMap::new(), ..self.clone_shape() }
    }

    fn clone_shape(&self) -> Self {
        Self {
            n: self.n,
            m: self.m,
            truncation: self.truncation,
            max_poly_degree: self.max_poly_degree,
            terms: BTreeMap::new(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    #[inline]
    pub fn max_poly_degree(&self) -> usize {
        self.max_poly_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &TermKey) -> Scalar {
        self.terms.get(key).copied().unwrap_or(re(0.0))
    }

    /// Adds `c` to the coefficient of `key`, validating the key against the
    /// form's dimensions and limits.
    pub fn add_term(&mut self, key: TermKey, c: Scalar) -> Result<()> {
        if key.x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: key.x.len() });
        }
        if key.dtheta.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: key.dtheta.len() });
        }
        if (key.theta as u64) >> self.m != 0 {
            return Err(Error::InvalidArgument("θ mask exceeds generator count"));
        }
        if (key.dx as u64) >> self.n != 0 {
            return Err(Error::InvalidArgument("dx mask exceeds base dimension"));
        }
        if key.dtheta_degree() > self.truncation {
            return Err(Error::TruncationOverflow { degree: key.dtheta_degree(), limit: self.truncation });
        }
        if key.poly_degree() > self.max_poly_degree {
            return Err(Error::PolynomialDegreeOverflow { degree: key.poly_degree(), limit: self.max_poly_degree });
        }
        self.accumulate(key, c);
        Ok(())
    }

    /// Convenience wrapper around [`SuperForm::add_term`].
    pub fn with_term(mut self, x: &[u32], theta: u32, dx: u32, dtheta: &[u32], c: Scalar) -> Result<Self> {
        self.add_term(TermKey::new(x.to_vec(), theta, dx, dtheta.to_vec()), c)?;
        Ok(self)
    }

    fn accumulate(&mut self, key: TermKey, c: Scalar) {
        if c.re == 0.0 && c.im == 0.0 {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                let sum = *slot.get() + c;
                if sum.re == 0.0 && sum.im == 0.0 {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
        }
    }

    /// A `θ`-dependent function (0-form, constant in `x`).
    pub fn from_function(n: usize, f: &Multivector) -> Result<Self> {
        let mut out = Self::zero(n, f.m())?;
        for (mask, c) in f.terms() {
            out.accumulate(TermKey { theta: mask, ..TermKey::unit(n, f.m()) }, c);
        }
        Ok(out)
    }

    /// The 1-form `dθ^{a+1}`.
    pub fn dtheta(n: usize, m: usize, a: usize) -> Result<Self> {
        let mut key = TermKey::unit(n, m);
        key.dtheta[a] = 1;
        let mut out = Self::zero(n, m)?;
        out.add_term(key, re(1.0))?;
        Ok(out)
    }

    /// The 1-form `dx^{i+1}`.
    pub fn dx(n: usize, m: usize, i: usize) -> Result<Self> {
        let mut out = Self::zero(n, m)?;
        out.add_term(TermKey { dx: 1 << i, ..TermKey::unit(n, m) }, re(1.0))?;
        Ok(out)
    }

    /// The coordinate function `x^{i+1}`.
    pub fn coordinate(n: usize, m: usize, i: usize) -> Result<Self> {
        let mut key = TermKey::unit(n, m);
        key.x[i] = 1;
        let mut out = Self::zero(n, m)?;
        out.add_term(key, re(1.0))?;
        Ok(out)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut diff = self.clone();
        for (k, c) in &other.terms {
            diff.accumulate(k.clone(), -c);
        }
        diff.max_abs()
    }

    /// Grassmann parity if every term agrees.
    pub fn parity(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(TermKey::parity);
        let first = it.next().unwrap_or(0);
        it.all(|p| p == first).then_some(first)
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter(&self, mut keep: impl FnMut(&TermKey) -> bool) -> Self {
        let mut out = self.clone_shape();
        out.terms = self.terms.iter().filter(|(k, _)| keep(k)).map(|(k, c)| (k.clone(), *c)).collect();
        out
    }

    /// The `(p, q)` component: `dx`-degree `p`, `dθ`-degree `q`.
    pub fn bidegree(&self, p: usize, q: usize) -> Self {
        self.filter(|k| k.dx_degree() == p && k.dtheta_degree() == q)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.accumulate(k.clone(), *c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(re(-1.0)))
    }

    pub fn scale(&self, c: Scalar) -> Self {
        let mut out = self.clone_shape();
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), v * c);
        }
        out
    }

    /// Wedge product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone_shape();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                let Some(s_theta) = blade_product_sign(k1.theta, k2.theta) else { continue };
                let Some(s_dx) = blade_product_sign(k1.dx, k2.dx) else { continue };
                let s_cross = sign_of(k1.dx.count_ones() * k2.theta.count_ones());
                let key = TermKey {
                    x: k1.x.iter().zip(&k2.x).map(|(a, b)| a + b).collect(),
                    theta: k1.theta | k2.theta,
                    dx: k1.dx | k2.dx,
                    dtheta: k1.dtheta.iter().zip(&k2.dtheta).map(|(a, b)| a + b).collect(),
                };
                out.add_term(key, c1 * c2 * (s_theta * s_dx * s_cross))?;
            }
        }
        Ok(out)
    }

    /// Left multiplication by a `θ`-dependent function.
    pub fn left_mul_function(&self, f: &Multivector) -> Result<Self> {
        if f.m() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: f.m() });
        }
        let mut g = Self::from_function(self.n, f)?;
        g.truncation = self.truncation;
        g.max_poly_degree = self.max_poly_degree;
        g.mul(self)
    }

    /// `d = dxⁱ ∂/∂xⁱ`.
    pub fn d_horiz(&self) -> Self {
        let mut out = self.clone_shape();
        for (k, c) in &self.terms {
            for i in 0..self.n {
                let bit = 1u32 << i;
                if k.x[i] == 0 || k.dx & bit != 0 {
                    continue;
                }
                let mut key = k.clone();
                key.x[i] -= 1;
                key.dx |= bit;
                let sign = sign_of(k.theta.count_ones() + (k.dx & (bit - 1)).count_ones());
                out.accumulate(key, c * (f64::from(k.x[i]) * sign));
            }
        }
        out
    }

    /// `d̂ = dθᵃ ∂/∂θᵃ`, failing when a term would exceed the truncation.
    pub fn d_vert(&self) -> Result<Self> {
        let out = self.d_vert_unbounded();
        if let Some(k) = out.terms.keys().find(|k| k.dtheta_degree() > self.truncation) {
            return Err(Error::TruncationOverflow { degree: k.dtheta_degree(), limit: self.truncation });
        }
        Ok(out)
    }

    /// `d̂` without the truncation check.
    pub fn d_vert_unbounded(&self) -> Self {
        let mut out = self.clone_shape();
        out.truncation = usize::MAX;
        for (k, c) in &self.terms {
            for a in 0..self.m {
                let bit = 1u32 << a;
                if k.theta & bit == 0 {
                    continue;
                }
                let mut key = k.clone();
                key.theta ^= bit;
                key.dtheta[a] += 1;
                let sign = sign_of((k.theta & (bit - 1)).count_ones());
                out.accumulate(key, c * sign);
            }
        }
        out.truncation = self.truncation;
        out
    }

    /// `d_T = d + d̂`.
    pub fn d_total(&self) -> Result<Self> {
        self.d_horiz().add(&self.d_vert()?)
    }

    /// `d_T` without the truncation check.
    pub fn d_total_unbounded(&self) -> Self {
        let mut out = self.d_vert_unbounded();
        for (k, c) in self.d_horiz().terms {
            out.accumulate(k, c);
        }
        out
    }

    /// Interior product with `∂/∂(dx^{i+1})`, acting from the left.
    pub fn interior_dx(&self, i: usize) -> Self {
        let bit = 1u32 << i;
        let mut out = self.clone_shape();
        for (k, c) in &self.terms {
            if k.dx & bit == 0 {
                continue;
            }
            let mut key = k.clone();
            key.dx ^= bit;
            let sign = sign_of(k.theta.count_ones() + (k.dx & (bit - 1)).count_ones());
            out.accumulate(key, c * sign);
        }
        out
    }

    /// Interior product with `∂/∂(dθ^{a+1})`.
    pub fn interior_dtheta(&self, a: usize) -> Self {
        let mut out = self.clone_shape();
        for (k, c) in &self.terms {
            if k.dtheta[a] == 0 {
                continue;
            }
            let mut key = k.clone();
            key.dtheta[a] -= 1;
            out.accumulate(key, c * f64::from(k.dtheta[a]));
        }
        out
    }

    /// The Euler homotopy `h = θᵃ ∂/∂(dθᵃ)`.
    pub fn euler_homotopy(&self) -> Self {
        let mut out = self.clone_shape();
        for (k, c) in &self.terms {
            for a in 0..self.m {
                if k.dtheta[a] == 0 {
                    continue;
                }
                let bit = 1u32 << a;
                let Some(sign) = blade_product_sign(bit, k.theta) else { continue };
                let mut key = k.clone();
                key.theta |= bit;
                key.dtheta[a] -= 1;
                out.accumulate(key, c * (f64::from(k.dtheta[a]) * sign));
            }
        }
        out
    }

    /// Evaluates the polynomial coefficients at `x0`, leaving a form
    /// constant in `x`.
    pub fn evaluate_at(&self, x0: &[f64]) -> Result<Self> {
        if x0.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x0.len() });
        }
        let mut out = self.clone_shape();
        for (k, c) in &self.terms {
            let value: f64 = k.x.iter().zip(x0).map(|(&e, &x)| libm::pow(x, f64::from(e))).product();
            let key = TermKey { x: vec![0; self.n], ..k.clone() };
            out.accumulate(key, c * value);
        }
        Ok(out)
    }

    /// The `θ`-dependent coefficient of `dx^I dθ^β` at `x0`.
    pub fn component_at(&self, x0: &[f64], dx: u32, dtheta: &[u32]) -> Result<Multivector> {
        let point = self.evaluate_at(x0)?;
        let mut out = Multivector::try_zero(self.m)?;
        for (k, c) in &point.terms {
            if k.dx == dx && k.dtheta == dtheta {
                out.coeffs_mut()[k.theta as usize] += *c;
            }
        }
        Ok(out)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        if self.m != other.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: other.m });
        }
        Ok(())
    }
}
