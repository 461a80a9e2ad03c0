//! Best approximation of `a` from the line `span{b}` in the numerical radius.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::matcore::{Matrix, C64};
use crate::orthkit::{pencil_min, pencil_min_from, Norm, PencilMin};
use crate::range::{crawford_details, numerical_radius_with};
use crate::settings::Settings;

/// Crawford numbers at or below this count as zero.
pub const CRAWFORD_FLOOR: f64 = 1e-8;
/// Largest spread of the restart minimizers accepted as agreement.
pub const AGREEMENT_TOL: f64 = 1e-6;

const SEPARATION_RINGS: [f64; 6] = [0.01, 0.1, 0.5, 1.0, 2.0, 10.0];
const SEPARATION_ANGLES: usize = 16;

/// Minimizer `ζ` of `λ ↦ v(a + λ b)`; the best approximation is `-ζ b`.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub zeta: C64,
    /// `v(a + ζ b)`, the distance from `a` to `span{b}`.
    pub distance: f64,
    pub unique: bool,
    /// Largest pairwise distance between the restart minimizers.
    pub restarts_agreement: f64,
    pub crawford_b: f64,
    pub restarts: Vec<C64>,
    /// Ring check around `ζ`, run when `𝒞(b) > 0`.
    pub separation: Option<Separation>,
}

impl ApproxResult {
    /// The best approximation `-ζ b`.
    pub fn best_point(&self, b: &Matrix) -> Matrix {
        b.scale(-self.zeta)
    }
}

/// Sampled check of `v²(a + η b) ≥ v²(a + ζ b) + |η - ζ|² 𝒞²(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub samples: usize,
    /// Smallest `v²(a + η b) - v²(a + ζ b) - |η - ζ|² 𝒞²(b)`.
    pub worst_slack: f64,
    pub worst_eta: C64,
    /// Every sample has `v(a + η b) > v(a + ζ b)`.
    pub strictly_better: bool,
    /// Every slack is at least `-1e-6 (1 + |η - ζ|²)`.
    pub holds: bool,
}

/// Minimizes `v(a + λ b)` from the origin and from the four compass points
/// of the coercivity disk `|λ| ≤ 2 v(a) / v(b)`.
pub fn best_approximation(a: &Matrix, b: &Matrix, settings: &Settings) -> Result<ApproxResult> {
    if b.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let crawford_b = crawford_details(b, settings).value;
    let va = numerical_radius_with(a, settings);
    let reach = 2.0 * va / numerical_radius_with(b, settings);

    let mut runs = vec![pencil_min(Norm::NumericalRadius, a, b, settings)];
    for k in 0..4 {
        let start = C64::new(0.0, 1.0).powu(k) * reach;
        runs.push(pencil_min_from(
            Norm::NumericalRadius,
            a,
            b,
            settings,
            start,
            2.5 * reach,
        ));
    }
    let restarts: Vec<C64> = runs.iter().map(|r| r.lambda).collect();
    let restarts_agreement = restarts
        .iter()
        .enumerate()
        .flat_map(|(i, x)| restarts[i + 1..].iter().map(move |y| (x - y).norm()))
        .fold(0.0, f64::max);

    let best = runs
        .iter()
        .min_by(|x, y| {
            let key = |r: &&PencilMin| (r.value, r.lambda.norm(), r.lambda.arg());
            key(x).partial_cmp(&key(y)).unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("five restarts");

    let mut result = ApproxResult {
        zeta: best.lambda,
        distance: best.value,
        unique: crawford_b > CRAWFORD_FLOOR && restarts_agreement <= AGREEMENT_TOL,
        restarts_agreement,
        crawford_b,
        restarts,
        separation: None,
    };
    if crawford_b > CRAWFORD_FLOOR {
        result.separation = Some(separation(a, b, &result, settings));
    }
    Ok(result)
}

/// Verifies the quadratic growth of `v²` away from `ζ` that makes the
/// minimizer unique. Requires `𝒞(b) > 0`.
pub fn uniqueness_certificate(
    a: &Matrix,
    b: &Matrix,
    result: &ApproxResult,
    settings: &Settings,
) -> Result<Separation> {
    if b.is_zero() {
        return Err(Error::ZeroDirection);
    }
    let crawford_b = crawford_details(b, settings).value;
    if crawford_b <= CRAWFORD_FLOOR {
        return Err(Error::PreconditionViolated(format!(
            "Crawford number {crawford_b:.3e} of the direction is zero"
        )));
    }
    let result = ApproxResult {
        crawford_b,
        ..result.clone()
    };
    Ok(separation(a, b, &result, settings))
}

fn separation(a: &Matrix, b: &Matrix, result: &ApproxResult, settings: &Settings) -> Separation {
    let base = a.add_scaled(result.zeta, b);
    let d2 = result.distance * result.distance;
    let c2 = result.crawford_b * result.crawford_b;
    let mut sep = Separation {
        samples: 0,
        worst_slack: f64::INFINITY,
        worst_eta: result.zeta,
        strictly_better: true,
        holds: true,
    };
    for &r in &SEPARATION_RINGS {
        for j in 0..SEPARATION_ANGLES {
            let step = C64::from_polar(r, TAU * j as f64 / SEPARATION_ANGLES as f64);
            let v = numerical_radius_with(&base.add_scaled(step, b), settings);
            let slack = v * v - d2 - r * r * c2;
            sep.samples += 1;
            if slack < sep.worst_slack {
                sep.worst_slack = slack;
                sep.worst_eta = result.zeta + step;
            }
            if v <= result.distance {
                sep.strictly_better = false;
            }
            if slack < -1e-6 * (1.0 + r * r) {
                sep.holds = false;
            }
        }
    }
    sep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;

    fn settings() -> Settings {
        Settings::DEFAULT
    }

    #[test]
    fn identity_against_diag_one_two() {
        let a = Matrix::identity(2);
        let b = Matrix::real_diag(&[1.0, 2.0]);
        let r = best_approximation(&a, &b, &settings()).unwrap();
        // max(|1 + λ|, |1 + 2λ|) balances at 1 + λ = -(1 + 2λ).
        assert!((r.zeta - c64(-2.0 / 3.0, 0.0)).norm() < 1e-6, "{:?}", r.zeta);
        assert!((r.distance - 1.0 / 3.0).abs() < 1e-6);
        assert!((r.crawford_b - 1.0).abs() < 1e-8);
        assert!(r.unique, "agreement {}", r.restarts_agreement);
        let sep = r.separation.clone().unwrap();
        assert!(sep.holds && sep.strictly_better, "{sep:?}");
        assert!(uniqueness_certificate(&a, &b, &r, &settings()).unwrap().holds);
    }

    #[test]
    fn diag_two_zero_against_identity() {
        let a = Matrix::real_diag(&[2.0, 0.0]);
        let b = Matrix::identity(2);
        let r = best_approximation(&a, &b, &settings()).unwrap();
        assert!((r.zeta - c64(-1.0, 0.0)).norm() < 1e-6, "{:?}", r.zeta);
        assert!((r.distance - 1.0).abs() < 1e-6);
        assert!(r.unique);
        assert!(uniqueness_certificate(&a, &b, &r, &settings()).unwrap().holds);
    }

    #[test]
    fn element_in_its_own_span() {
        let a = Matrix::from_pairs(&[&[(0.0, 1.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 1.0)]]).unwrap();
        let r = best_approximation(&a, &a, &settings()).unwrap();
        assert!((r.zeta - c64(-1.0, 0.0)).norm() < 1e-6, "{:?}", r.zeta);
        assert!(r.distance < 1e-6);
    }

    #[test]
    fn zero_direction_is_rejected() {
        let a = Matrix::identity(2);
        assert_eq!(
            best_approximation(&a, &Matrix::zeros(2), &settings()),
            Err(Error::ZeroDirection)
        );
    }

    #[test]
    fn certificate_needs_positive_crawford_number() {
        let a = Matrix::from_pairs(&[&[(0.0, 1.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 1.0)]]).unwrap();
        let n = Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let r = best_approximation(&a, &n, &settings()).unwrap();
        assert!(!r.unique);
        assert!(r.separation.is_none());
        assert!(matches!(
            uniqueness_certificate(&a, &n, &r, &settings()),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
