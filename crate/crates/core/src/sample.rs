//! Random matrices from the structural classes used by property tests and
//! the fuzz harness.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::matcore::{adjoint, dot, vector_norm, Matrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixClass {
    General,
    Hermitian,
    Positive,
    Normal,
    NilpotentSquare,
}

impl MatrixClass {
    pub const ALL: [MatrixClass; 5] = [
        MatrixClass::General,
        MatrixClass::Hermitian,
        MatrixClass::Positive,
        MatrixClass::Normal,
        MatrixClass::NilpotentSquare,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            MatrixClass::General => "general",
            MatrixClass::Hermitian => "hermitian",
            MatrixClass::Positive => "positive",
            MatrixClass::Normal => "normal",
            MatrixClass::NilpotentSquare => "nilpotent_square",
        }
    }
}

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MatrixClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MatrixClass::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| format!("unknown matrix class `{s}`"))
    }
}

pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    Matrix::new(n, (0..n * n).map(|_| gaussian(rng)).collect()).expect("finite entries")
}

/// Unitary from Gram–Schmidt on Gaussian columns.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let mut columns: Vec<Vec<C64>> = Vec::with_capacity(n);
    while columns.len() < n {
        let mut x: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &columns {
                let c = dot(&x, q);
                x.iter_mut().zip(q).for_each(|(xi, qi)| *xi -= c * qi);
            }
        }
        let norm = vector_norm(&x);
        if norm > 1e-8 {
            columns.push(x.iter().map(|z| z / norm).collect());
        }
    }
    Matrix::from_columns(&columns).expect("square column set")
}

pub fn random_matrix<R: Rng + ?Sized>(class: MatrixClass, n: usize, rng: &mut R) -> Matrix {
    match class {
        MatrixClass::General => gaussian_matrix(n, rng),
        MatrixClass::Hermitian => gaussian_matrix(n, rng).hermitian_part(),
        MatrixClass::Positive => {
            let g = gaussian_matrix(n, rng);
            (&adjoint(&g) * &g).hermitian_part().scale_real(1.0 / n as f64)
        }
        MatrixClass::Normal => {
            let u = random_unitary(n, rng);
            let d = Matrix::diag(&(0..n).map(|_| gaussian(rng)).collect::<Vec<_>>());
            &(&u * &d) * &adjoint(&u)
        }
        MatrixClass::NilpotentSquare => {
            // V X W* with V ⊥ W, so the range lies in the kernel.
            let u = random_unitary(n, rng);
            let k = n / 2;
            let mut m = Matrix::zeros(n);
            for p in 0..k {
                for q in k..n {
                    let x = gaussian(rng);
                    for i in 0..n {
                        for j in 0..n {
                            let z = m.get(i, j) + u.get(i, p) * x * u.get(j, q).conj();
                            m.set(i, j, z);
                        }
                    }
                }
            }
            m
        }
    }
}
