//! Dense complex matrices and the Hermitian eigensolver everything else
//! builds on.

mod combo;
mod eigen;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub(crate) use combo::{rotation, HermitianCombo};
pub use eigen::{hermitian_eig, lambda_max_in_place, HermitianEigen};

pub type C64 = Complex64;

/// Dimensions above this are rejected outright.
pub const MAX_DIM: usize = 256;
/// Dimensions above this work but are far outside the tuned range.
pub const SOFT_MAX_DIM: usize = 64;

const FLAG_TOL: f64 = 1e-10;
const ORTHONORMAL_TOL: f64 = 1e-10;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// A dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    /// Builds a matrix from row-major entries, checking shape and finiteness.
    pub fn new(dim: usize, data: Vec<C64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Empty);
        }
        if dim > MAX_DIM {
            return Err(Error::TooLarge { dim, limit: MAX_DIM });
        }
        if data.len() != dim * dim {
            return Err(Error::NotSquare {
                expected: dim * dim,
                found: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::NotSquare {
                    expected: dim * dim,
                    found: rows.iter().map(Vec::len).sum(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Convenience constructor for fixtures written as `(re, im)` pairs.
    pub fn from_pairs(rows: &[&[(f64, f64)]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&(re, im)| c64(re, im)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows
            .iter()
            .map(|r| r.iter().map(|&re| c64(re, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0 && dim <= MAX_DIM, "invalid dimension {dim}");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &z) in values.iter().enumerate() {
            m.data[i * values.len() + i] = z;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        let values: Vec<C64> = values.iter().map(|&x| c64(x, 0.0)).collect();
        Self::diag(&values)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<C64>]) -> Result<Self> {
        let dim = columns.len();
        let mut m = Self::zeros(dim.max(1));
        if dim == 0 {
            return Err(Error::Empty);
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: col.len(),
                });
            }
            for (i, &z) in col.iter().enumerate() {
                m.data[i * dim + j] = z;
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: C64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[C64]> {
        self.data.chunks(self.dim)
    }

    pub fn column(&self, col: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self.get(i, col)).collect()
    }

    pub fn scale(&self, alpha: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| alpha * z).collect(),
        }
    }

    pub fn scale_real(&self, alpha: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * alpha).collect(),
        }
    }

    /// Returns `self + alpha * other`.
    pub fn add_scaled(&self, alpha: C64, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&x, &y)| x + alpha * y)
                .collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Computes `M x`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        self.rows()
            .map(|row| row.iter().zip(x).map(|(&m, &v)| m * v).sum())
            .collect()
    }

    /// The quadratic form `<M x, x> = x* M x`.
    pub fn quadratic_form(&self, x: &[C64]) -> C64 {
        let n = self.dim;
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let mut row = C64::new(0.0, 0.0);
            for j in 0..n {
                row += self.data[i * n + j] * x[j];
            }
            acc += x[i].conj() * row;
        }
        acc
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
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

    /// Largest entrywise distance to `other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    /// Hermitian part `(M + M*)/2`, exactly Hermitian in floating point.
    pub fn hermitian_part(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = (self.data[i * n + j] + self.data[j * n + i].conj()) * 0.5;
            }
        }
        out
    }

    /// Skew part `(M - M*)/(2i)`, so that `M = hermitian_part + i * skew_part`.
    pub fn skew_part(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let d = self.data[i * n + j] - self.data[j * n + i].conj();
                out.data[i * n + j] = c64(0.5 * d.im, -0.5 * d.re);
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        self.add_scaled(C64::new(1.0, 0.0), rhs)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        self.add_scaled(C64::new(-1.0, 0.0), rhs)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        self.matmul(rhs)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale_real(-1.0)
    }
}

/// Conjugate transpose.
pub fn adjoint(m: &Matrix) -> Matrix {
    let n = m.dim;
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.data[j * n + i] = m.data[i * n + j].conj();
        }
    }
    out
}

/// `Re(e^{iθ} m) = (e^{iθ} m + e^{-iθ} m*) / 2`.
pub fn rotated_real_part(m: &Matrix, theta: f64) -> Matrix {
    let n = m.dim;
    let rot = C64::from_polar(1.0, theta);
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let z = rot * m.data[i * n + j] + rot.conj() * m.data[j * n + i].conj();
            out.data[i * n + j] = z * 0.5;
        }
    }
    out
}

/// `Im(e^{iθ} m) = (e^{iθ} m - e^{-iθ} m*) / (2i)`.
pub fn rotated_imag_part(m: &Matrix, theta: f64) -> Matrix {
    rotated_real_part(m, theta - std::f64::consts::FRAC_PI_2)
}

/// Largest singular value, computed as `sqrt(λ_max(m* m))`.
pub fn operator_norm(m: &Matrix) -> f64 {
    let mut gram = gram(m);
    let n = m.dim;
    lambda_max_in_place(&mut gram.data, n).max(0.0).sqrt()
}

/// `m* m`, which is exactly Hermitian in floating point.
pub(crate) fn gram(m: &Matrix) -> Matrix {
    let n = m.dim;
    let mut out = Matrix::zeros(n);
    for i in 0..n {
        for j in i..n {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n {
                acc += m.data[k * n + i].conj() * m.data[k * n + j];
            }
            out.data[i * n + j] = acc;
            out.data[j * n + i] = acc.conj();
        }
        out.data[i * n + i].im = 0.0;
    }
    out
}

/// Compression of `m` to the span of an orthonormal family: the `k x k`
/// matrix with entries `<m b_j, b_i>`.
pub fn compress(m: &Matrix, basis: &[Vec<C64>]) -> Result<Matrix> {
    let n = m.dim;
    let k = basis.len();
    if k == 0 {
        return Err(Error::Empty);
    }
    if let Some(bad) = basis.iter().find(|b| b.len() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bad.len(),
        });
    }
    let mut deviation: f64 = 0.0;
    for i in 0..k {
        for j in 0..k {
            let g = dot(&basis[i], &basis[j]);
            let target = if i == j { 1.0 } else { 0.0 };
            deviation = deviation.max((g - target).norm());
        }
    }
    if deviation > ORTHONORMAL_TOL {
        return Err(Error::BasisNotOrthonormal { deviation });
    }
    let images: Vec<Vec<C64>> = basis.iter().map(|b| m.apply(b)).collect();
    let mut out = Matrix::zeros(k);
    for i in 0..k {
        for j in 0..k {
            out.data[i * k + j] = dot(&images[j], &basis[i]);
        }
    }
    Ok(out)
}

/// Structural flags of a matrix, each decided at a relative tolerance of 1e-10.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Flags {
    pub hermitian: bool,
    pub normal: bool,
    pub positive: bool,
    pub nilpotent_square: bool,
}

pub fn classify(m: &Matrix) -> Flags {
    let norm = operator_norm(m);
    let star = adjoint(m);
    let hermitian = operator_norm(&(m - &star)) <= FLAG_TOL * norm;
    let commutator = &(&star * m) - &(m * &star);
    let normal = operator_norm(&commutator) <= FLAG_TOL * norm * norm;
    let positive = hermitian && {
        // λ_min(h) = -λ_max(-h)
        let mut neg = m.hermitian_part().scale_real(-1.0);
        let lambda_min = -lambda_max_in_place(&mut neg.data, m.dim);
        lambda_min >= -FLAG_TOL * norm.max(1.0)
    };
    let nilpotent_square = operator_norm(&(m * m)) <= FLAG_TOL * norm * norm;
    Flags {
        hermitian,
        normal,
        positive,
        nilpotent_square,
    }
}

/// Euclidean inner product `<x, y> = sum x_i conj(y_i)`.
#[inline]
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(&a, &b)| a * b.conj()).sum()
}

#[inline]
pub fn vector_norm(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Multiplies `x` by a unimodular scalar so its largest-magnitude entry is
/// real and positive. Ties go to the first index.
pub fn fix_phase(x: &mut [C64]) {
    let peak = x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return;
    }
    let pivot = x
        .iter()
        .position(|z| z.norm() >= peak * (1.0 - 1e-12))
        .expect("peak entry exists");
    let phase = x[pivot].conj() / x[pivot].norm();
    for z in x.iter_mut() {
        *z *= phase;
    }
    x[pivot] = c64(x[pivot].norm(), 0.0);
}
