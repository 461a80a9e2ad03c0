//! Independent reference computations shared by the property suites.
#![allow(dead_code)]

use std::f64::consts::TAU;

use numrad::matcore::{adjoint, C64};
use numrad::sample::{gaussian_matrix, random_matrix, MatrixClass};
use numrad::Matrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn nilpotent() -> Matrix {
    Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
}

/// Matrices with entries in the square `[-2, 2]²`.
pub fn matrix(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Matrix> {
    dims.prop_flat_map(|n| {
        proptest::collection::vec((-2.0..2.0f64, -2.0..2.0f64), n * n)
            .prop_map(move |e| Matrix::new(n, e.into_iter().map(|(re, im)| C64::new(re, im)).collect()).unwrap())
    })
}

pub fn nonzero_matrix(dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Matrix> {
    matrix(dims).prop_filter("nonzero", |m| m.frobenius_norm() > 1e-3)
}

pub fn class_matrix(class: MatrixClass, n: usize, seed: u64) -> Matrix {
    random_matrix(class, n, &mut rng(seed))
}

pub fn general(n: usize, seed: u64) -> Matrix {
    gaussian_matrix(n, &mut rng(seed))
}

/// Largest eigenvalue of a Hermitian matrix by shifted power iteration; the
/// returned Rayleigh quotient never exceeds the true value.
pub fn lambda_max_power(h: &Matrix) -> f64 {
    let n = h.dim();
    let shift = h.frobenius_norm();
    let mut x: Vec<C64> = (0..n)
        .map(|i| C64::new(1.0 + 0.37 * i as f64, 0.11 * i as f64))
        .collect();
    let mut rq = f64::NEG_INFINITY;
    for _ in 0..2000 {
        let hx = h.apply(&x);
        let y: Vec<C64> = hx.iter().zip(&x).map(|(a, b)| a + b * shift).collect();
        let norm = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x = y.into_iter().map(|z| z / norm).collect();
        rq = h.quadratic_form(&x).re;
    }
    rq
}

/// `max_θ λ_max(Re(e^{iθ} a))` over a uniform grid, by power iteration.
pub fn radius_lower_oracle(a: &Matrix, grid: usize) -> f64 {
    (0..grid)
        .map(|k| {
            let t = TAU * k as f64 / grid as f64;
            let r = a.scale(C64::from_polar(1.0, t));
            lambda_max_power(&(&r + &adjoint(&r)).scale_real(0.5))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Operator norm as the square root of the top eigenvalue of `m* m`, by power iteration.
pub fn operator_norm_oracle(m: &Matrix) -> f64 {
    lambda_max_power(&(&adjoint(m) * m)).max(0.0).sqrt()
}

/// Unit vector with independent Gaussian entries.
pub fn random_unit(n: usize, r: &mut ChaCha8Rng) -> Vec<C64> {
    let x: Vec<C64> = (0..n).map(|_| numrad::sample::gaussian(r)).collect();
    let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    x.into_iter().map(|z| z / norm).collect()
}
