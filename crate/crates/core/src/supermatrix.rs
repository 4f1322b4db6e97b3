//! Rectangular matrices with [`Multivector`] entries.
//!
//! Products keep the entry order, so odd entries pick up the right signs.
//! Determinants and inverses are only meaningful for even entries, which
//! commute with each other.

use alloc::vec::Vec;

use crate::grassmann::Multivector;
use crate::linalg::ComplexMatrix;
use crate::{re, Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannMatrix {
    rows: usize,
    cols: usize,
    m: usize,
    data: Vec<Multivector>,
}

impl GrassmannMatrix {
    pub fn zeros(rows: usize, cols: usize, m: usize) -> Self {
        Self { rows, cols, m, data: (0..rows * cols).map(|_| Multivector::zero(m)).collect() }
    }

    pub fn identity(n: usize, m: usize) -> Self {
        let mut out = Self::zeros(n, n, m);
        for i in 0..n {
            out.set(i, i, Multivector::one(m));
        }
        out
    }

    /// Embeds a complex matrix as `θ`-free entries.
    pub fn from_complex(x: &ComplexMatrix, m: usize) -> Self {
        let n = x.n();
        let mut out = Self::zeros(n, n, m);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, Multivector::scalar(m, x[(i, j)]));
            }
        }
        out
    }

    pub fn from_fn(rows: usize, cols: usize, m: usize, mut f: impl FnMut(usize, usize) -> Multivector) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let entry = f(i, j);
                assert_eq!(entry.m(), m, "generator count mismatch");
                data.push(entry);
            }
        }
        Self { rows, cols, m, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Multivector {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Multivector) {
        self.data[i * self.cols + j] = value;
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.m, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.m);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Multivector::zero(self.m);
                for k in 0..self.cols {
                    acc += &self.get(i, k).product(other.get(k, j))?;
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    fn zip(&self, other: &Self, f: impl Fn(&Multivector, &Multivector) -> Multivector) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self { data: self.data.iter().map(|x| x.scale(c)).collect(), ..self.clone() }
    }

    /// The `θ`-free part of a square matrix.
    pub fn body(&self) -> ComplexMatrix {
        assert_eq!(self.rows, self.cols, "square matrix required");
        ComplexMatrix::from_fn(self.rows, |i, j| self.get(i, j).body())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.max_abs()))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Inverse of a square matrix with even entries and invertible body:
    /// `(E₀ + N)⁻¹ = Σ_k (−E₀⁻¹N)^k E₀⁻¹`, a finite sum since `N` is nilpotent.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let body = self.body();
        let body_inv = Self::from_complex(&body.inverse()?, self.m);
        let nil = self.sub(&Self::from_complex(&body, self.m))?;
        let step = body_inv.mul(&nil)?.scale(re(-1.0));
        let mut power = Self::identity(n, self.m);
        let mut sum = Self::identity(n, self.m);
        for _ in 0..=self.m {
            power = power.mul(&step)?;
            if power.max_abs() == 0.0 {
                break;
            }
            sum = sum.add(&power)?;
        }
        sum.mul(&body_inv)
    }

    /// Determinant of a square matrix with even (mutually commuting)
    /// entries, by cofactor expansion.
    pub fn det(&self) -> Result<Multivector> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        Ok(self.minor_det(&idx, 0))
    }

    fn minor_det(&self, cols: &[usize], row: usize) -> Multivector {
        if cols.is_empty() {
            return Multivector::one(self.m);
        }
        let mut acc = Multivector::zero(self.m);
        for (pos, &c) in cols.iter().enumerate() {
            let entry = self.get(row, c);
            if entry.is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let sign = if pos % 2 == 0 { 1.0 } else { -1.0 };
            let term = entry.product_unchecked(&self.minor_det(&rest, row + 1));
            acc.add_scaled(&term, re(sign));
        }
        acc
    }
}

/// `√x` for an even element with positive-real body, by the binomial series
/// in the nilpotent part.
pub fn even_sqrt(x: &Multivector) -> Result<Multivector> {
    let b = x.body();
    if b.norm() == 0.0 {
        return Err(Error::Singular);
    }
    let root = b.sqrt();
    let nil = x.soul().scale(re(1.0) / b);
    let mut coeff = 1.0;
    let mut power = Multivector::one(x.m());
    let mut sum = Multivector::one(x.m());
    for k in 1..=x.m() {
        coeff *= (0.5 - (k as f64 - 1.0)) / k as f64;
        power = power.product_unchecked(&nil);
        if power.is_zero() {
            break;
        }
        sum.add_scaled(&power, re(coeff));
    }
    Ok(sum.scale(root))
}
