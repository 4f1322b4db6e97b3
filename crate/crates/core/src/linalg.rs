//! Small dense square matrices over `f64` and `Complex64`.
//!
//! Sizes in this crate never exceed 64×64, so everything is plain
//! row-major storage with textbook algorithms.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{re, Error, Result, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    n: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            out[(i, i)] = 1.0;
        }
        out
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = f(i, j);
            }
        }
        out
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut out = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            out[(i, i)] = *v;
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, c: f64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.sub(other).max_abs()
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.transpose()) <= tol
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for r in col + 1..n {
                let f = a[r * n + col] / p;
                if f != 0.0 {
                    for j in col..n {
                        a[r * n + j] -= f * a[col * n + j];
                    }
                }
            }
        }
        det
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].abs().total_cmp(&a[s * n + col].abs()))
                .unwrap_or(col);
            if a[pivot * n + col].abs() <= scale * 1e-14 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r * n + j] -= f * a[col * n + j];
                        inv[r * n + j] -= f * inv[col * n + j];
                    }
                }
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Lower-triangular `L` with `L Lᵀ = self`.
    pub fn cholesky(&self) -> Result<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut s = self[(i, j)];
                for k in 0..j {
                    s -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[(i, i)] = libm::sqrt(s);
                } else {
                    l[(i, j)] = s / l[(j, j)];
                }
            }
        }
        Ok(l)
    }

    /// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
    /// Returns eigenvalues and the orthogonal matrix whose columns are the
    /// eigenvectors.
    pub fn symmetric_eigen(&self) -> (Vec<f64>, Self) {
        let n = self.n;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[(i, j)] * a[(i, j)])
                .sum();
            let diag: f64 = (0..n).map(|i| a[(i, i)] * a[(i, i)]).sum();
            if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) || off == 0.0 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..n {
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        a[(k, p)] = c * akp - s * akq;
                        a[(k, q)] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let apk = a[(p, k)];
                        let aqk = a[(q, k)];
                        a[(p, k)] = c * apk - s * aqk;
                        a[(q, k)] = s * apk + c * aqk;
                    }
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        ((0..n).map(|i| a[(i, i)]).collect(), v)
    }

    /// Minimal-norm least-squares pseudo-inverse, with singular values below
    /// `tol · max singular value` treated as zero.
    pub fn pseudo_inverse(&self, tol: f64) -> Self {
        let n = self.n;
        let ata = self.transpose().mul(self);
        let (vals, v) = ata.symmetric_eigen();
        let top = vals.iter().cloned().fold(0.0, f64::max);
        let cut = tol * tol * top;
        let mut inv_diag = vec![0.0; n];
        for (k, &l) in vals.iter().enumerate() {
            if l > cut && l > 0.0 {
                inv_diag[k] = 1.0 / l;
            }
        }
        let ata_pinv = Self::from_fn(n, |i, j| (0..n).map(|k| v[(i, k)] * inv_diag[k] * v[(j, k)]).sum());
        ata_pinv.mul(&self.transpose())
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Scalar>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![re(0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            out[(i, i)] = re(1.0);
        }
        out
    }

    pub fn from_rows<R: AsRef<[Scalar]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, found: row.len() });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = f(i, j);
            }
        }
        out
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, c: Scalar) -> Self {
        Self { n: self.n, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// `self += c · other`.
    pub fn add_scaled(&mut self, other: &Self, c: Scalar) {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += y * c;
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Scalar {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a * b, |i, j| self[(i / b, j / b)] * other[(i % b, j % b)])
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        let scale = self.data.iter().fold(f64::MIN_POSITIVE, |m, z| m.max(z.norm()));
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r * n + col].norm().total_cmp(&a[s * n + col].norm()))
                .unwrap_or(col);
            if a[pivot * n + col].norm() <= scale * 1e-14 {
                return Err(Error::Singular);
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a[col * n + col];
            for j in 0..n {
                a[col * n + j] /= p;
                inv[col * n + j] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[r * n + col];
                if f.re != 0.0 || f.im != 0.0 {
                    for j in 0..n {
                        let (x, y) = (a[col * n + j], inv[col * n + j]);
                        a[r * n + j] -= f * x;
                        inv[r * n + j] -= f * y;
                    }
                }
            }
        }
        Ok(Self { n, data: inv })
    }

    /// Real symmetric `2n × 2n` image `[[Re, −Im], [Im, Re]]` of a Hermitian matrix.
    fn real_embedding(&self) -> RealMatrix {
        let n = self.n;
        RealMatrix::from_fn(2 * n, |i, j| {
            let z = self[(i % n, j % n)];
            match (i < n, j < n) {
                (true, true) | (false, false) => z.re,
                (true, false) => -z.im,
                (false, true) => z.im,
            }
        })
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let (mut vals, _) = self.real_embedding().symmetric_eigen();
        vals.sort_by(f64::total_cmp);
        // every eigenvalue appears twice in the real embedding
        vals.into_iter().step_by(2).collect()
    }

    /// Hermitian positive semidefinite square root. Eigenvalues down to
    /// `-tol · max(1, ‖self‖)` are clamped to zero; anything more negative
    /// is reported as [`Error::NotPositiveDefinite`].
    pub fn hermitian_sqrt(&self, tol: f64) -> Result<Self> {
        let n = self.n;
        let emb = self.real_embedding();
        let (vals, v) = emb.symmetric_eigen();
        let scale = vals.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if vals.iter().any(|&l| l < -tol * scale) {
            return Err(Error::NotPositiveDefinite);
        }
        let roots: Vec<f64> = vals.iter().map(|&l| libm::sqrt(l.max(0.0))).collect();
        let big = 2 * n;
        let s = RealMatrix::from_fn(big, |i, j| (0..big).map(|k| v[(i, k)] * roots[k] * v[(j, k)]).sum());
        Ok(Self::from_fn(n, |i, j| Scalar::new(s[(i, j)], s[(i + n, j)])))
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Scalar;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.n + j]
    }
}

/// Real 2×2 matrix `[[a, b], [c, d]]` stored as `[[a, b], [c, d]]`.
pub type Mat2 = [[f64; 2]; 2];

pub const IDENTITY2: Mat2 = [[1.0, 0.0], [0.0, 1.0]];

/// `ε` with `ε₁₂ = 1`.
pub const EPSILON2: Mat2 = [[0.0, 1.0], [-1.0, 0.0]];

pub fn mat2_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

pub fn mat2_add(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub fn mat2_scale(a: &Mat2, c: f64) -> Mat2 {
    [[a[0][0] * c, a[0][1] * c], [a[1][0] * c, a[1][1] * c]]
}

pub fn mat2_transpose(a: &Mat2) -> Mat2 {
    [[a[0][0], a[1][0]], [a[0][1], a[1][1]]]
}

pub fn mat2_det(a: &Mat2) -> f64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn mat2_trace(a: &Mat2) -> f64 {
    a[0][0] + a[1][1]
}

pub fn mat2_inverse(a: &Mat2) -> Result<Mat2> {
    let det = mat2_det(a);
    let scale = a.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if det.abs() <= 1e-14 * scale * scale || det == 0.0 {
        return Err(Error::Singular);
    }
    Ok([[a[1][1] / det, -a[0][1] / det], [-a[1][0] / det, a[0][0] / det]])
}

pub fn mat2_mul_vec(a: &Mat2, v: &[f64; 2]) -> [f64; 2] {
    [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
}

pub fn mat2_max_abs_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut m = 0.0f64;
    for i in 0..2 {
        for j in 0..2 {
            m = m.max((a[i][j] - b[i][j]).abs());
        }
    }
    m
}

/// Matrix exponential of a real 2×2 matrix in closed form.
///
/// With `A = sI + B`, `B` traceless, `B² = -det(B)·I`, so `exp(B)` is a
/// combination of `I` and `B` with trigonometric or hyperbolic weights.
pub fn mat2_expm(a: &Mat2) -> Mat2 {
    let s = 0.5 * mat2_trace(a);
    let b = [[a[0][0] - s, a[0][1]], [a[1][0], a[1][1] - s]];
    let q = -mat2_det(&b);
    let (c, sinc) = if q > 0.0 {
        let r = libm::sqrt(q);
        (libm::cosh(r), libm::sinh(r) / r)
    } else if q < 0.0 {
        let r = libm::sqrt(-q);
        (libm::cos(r), libm::sin(r) / r)
    } else {
        (1.0, 1.0)
    };
    let e = libm::exp(s);
    [
        [e * (c + sinc * b[0][0]), e * sinc * b[0][1]],
        [e * sinc * b[1][0], e * (c + sinc * b[1][1])],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_det() {
        let a = RealMatrix::from_rows(&[[4.0, 1.0, 0.0], [1.0, 3.0, 2.0], [0.0, 2.0, 5.0]]).unwrap();
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).max_abs_diff(&RealMatrix::identity(3)) < 1e-14);
        assert!((a.det() - 4.0 * 11.0 + 5.0).abs() < 1e-12);
        assert_eq!(RealMatrix::zeros(2).inverse().unwrap_err(), Error::Singular);
    }

    #[test]
    fn cholesky_factor() {
        let a = RealMatrix::from_rows(&[[4.0, 2.0], [2.0, 3.0]]).unwrap();
        let l = a.cholesky().unwrap();
        assert!(l.mul(&l.transpose()).max_abs_diff(&a) < 1e-15);
        let b = RealMatrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert_eq!(b.cholesky().unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn jacobi_eigen() {
        let a = RealMatrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]).unwrap();
        let (mut vals, _) = a.symmetric_eigen();
        vals.sort_by(f64::total_cmp);
        assert!((vals[0] - 1.0).abs() < 1e-14 && (vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn pseudo_inverse_of_skew() {
        // kernel spanned by e₃
        let w = RealMatrix::from_rows(&[[0.0, 2.0, 0.0], [-2.0, 0.0, 0.0], [0.0, 0.0, 0.0]]).unwrap();
        let p = w.pseudo_inverse(1e-12);
        assert!(w.mul(&p).mul(&w).max_abs_diff(&w) < 1e-14);
        assert!(p[(2, 2)].abs() < 1e-15);
        assert!((p[(0, 1)] + 0.5).abs() < 1e-14);
    }

    #[test]
    fn hermitian_sqrt_squares_back() {
        let a = ComplexMatrix::from_rows(&[
            [re(3.0), Scalar::new(1.0, -1.0)],
            [Scalar::new(1.0, 1.0), re(2.0)],
        ])
        .unwrap();
        let s = a.hermitian_sqrt(1e-12).unwrap();
        assert!(s.is_hermitian(1e-14));
        assert!(s.mul(&s).max_abs_diff(&a) < 1e-13);
        let ev = a.hermitian_eigenvalues();
        assert!((ev[0] + ev[1] - 5.0).abs() < 1e-13 && (ev[0] * ev[1] - 4.0).abs() < 1e-12);
        let neg = ComplexMatrix::from_rows(&[[re(-1.0), re(0.0)], [re(0.0), re(1.0)]]).unwrap();
        assert!(neg.hermitian_sqrt(1e-12).is_err());
    }

    #[test]
    fn expm_rotation_and_scaling() {
        let rot = mat2_expm(&[[0.0, -1.0], [1.0, 0.0]]);
        let (c, s) = (libm::cos(1.0), libm::sin(1.0));
        assert!(mat2_max_abs_diff(&rot, &[[c, -s], [s, c]]) < 1e-15);
        let hyp = mat2_expm(&[[1.0, 2.0], [0.0, 1.0]]);
        let e = libm::exp(1.0);
        assert!(mat2_max_abs_diff(&hyp, &[[e, 2.0 * e], [0.0, e]]) < 1e-14);
        let boost = mat2_expm(&[[0.0, 1.0], [1.0, 0.0]]);
        assert!((boost[0][0] - libm::cosh(1.0)).abs() < 1e-15);
    }
}
