//! Numerical range geometry through the support function
//! `g(θ) = λ_max(Re(e^{iθ} a))`.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::matcore::{
    compress, hermitian_eig, rotated_imag_part, rotated_real_part, rotation, HermitianCombo, Matrix, C64,
};
use crate::optim::{angle_distance, sweep_max, wrap_angle, SweepMax};
use crate::settings::Settings;

const REFINE_WIDTH: f64 = 1e-12;
/// Relative width of the top eigenvalue cluster treated as one eigenspace.
const CLUSTER_GAP: f64 = 1e-8;
const POLISH_HALF_WIDTH: f64 = 1e-5;

/// Sampled support function with refined local maxima.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportProfile {
    pub matrix_dim: usize,
    pub grid_size: usize,
    pub samples: Vec<(f64, f64)>,
    pub refined_maxima: Vec<(f64, f64)>,
    /// Set when a large share of the circle sits at the maximum.
    pub flat: bool,
}

impl SupportProfile {
    /// Largest support value seen, refined or sampled.
    pub fn max(&self) -> f64 {
        self.best().1
    }

    pub fn argmax(&self) -> f64 {
        self.best().0
    }

    fn best(&self) -> (f64, f64) {
        self.refined_maxima
            .iter()
            .chain(&self.samples)
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |acc, s| if s.1 > acc.1 { s } else { acc })
    }
}

/// `g(θ) = λ_max(Re(e^{iθ} a))`.
pub fn support_value(a: &Matrix, theta: f64) -> f64 {
    HermitianCombo::support(a).lambda_max(&rotation(theta))
}

/// Upper bound on `|g'|`, used to decide which grid maxima are worth refining.
fn lipschitz_bound(a: &Matrix) -> f64 {
    a.frobenius_norm()
}

fn sweep(a: &Matrix, settings: &Settings) -> SweepMax {
    let mut kernel = HermitianCombo::support(a);
    sweep_max(
        |t| kernel.lambda_max(&rotation(t)),
        settings.grid,
        lipschitz_bound(a),
        settings.flat_tol,
        settings.flat_fraction,
        REFINE_WIDTH,
    )
}

pub fn support_profile(a: &Matrix, settings: &Settings) -> SupportProfile {
    let s = sweep(a, settings);
    SupportProfile {
        matrix_dim: a.dim(),
        grid_size: s.samples.len(),
        samples: s.samples,
        refined_maxima: s.refined,
        flat: s.flat,
    }
}

/// `v(a) = max_θ g(θ)` with the default settings.
pub fn numerical_radius(a: &Matrix) -> f64 {
    numerical_radius_with(a, &Settings::DEFAULT)
}

pub fn numerical_radius_with(a: &Matrix, settings: &Settings) -> f64 {
    if a.is_zero() {
        return 0.0;
    }
    sweep(a, settings).best().1.max(0.0)
}

/// One supporting point `⟨a x_θ, x_θ⟩` of the numerical range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub z: C64,
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RangeBoundary {
    pub points: Vec<BoundaryPoint>,
    /// Always true: numerical ranges are convex.
    pub convex: bool,
}

impl RangeBoundary {
    /// CSV with header `theta,re,im,support` and 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("theta,re,im,support\n");
        for p in &self.points {
            writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                p.theta, p.z.re, p.z.im, p.support
            )
            .expect("writing to a String");
        }
        out
    }
}

/// Supporting points at `count` uniform angles.
pub fn boundary_points(a: &Matrix, count: usize) -> Result<RangeBoundary> {
    if count == 0 {
        return Err(Error::PreconditionViolated(
            "boundary sample count must be positive".into(),
        ));
    }
    let points = (0..count)
        .map(|k| {
            let theta = TAU * k as f64 / count as f64;
            let eig = hermitian_eig(&rotated_real_part(a, theta))?;
            let x = eig.vector(0);
            Ok(BoundaryPoint {
                theta,
                z: a.quadratic_form(&x),
                support: eig.max(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RangeBoundary { points, convex: true })
}

/// Distance from the origin to the numerical range, with the data behind it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crawford {
    pub value: f64,
    pub contains_origin: bool,
    /// Minimizer of the support function.
    pub theta: f64,
    pub min_support: f64,
    /// The nearest point of the range when the origin lies outside it.
    pub nearest: Option<C64>,
}

pub fn crawford_number(b: &Matrix) -> f64 {
    crawford_details(b, &Settings::DEFAULT).value
}

pub fn crawford_details(b: &Matrix, settings: &Settings) -> Crawford {
    let mut kernel = HermitianCombo::support(b);
    let s = sweep_max(
        |t| -kernel.lambda_max(&rotation(t)),
        settings.grid,
        lipschitz_bound(b),
        settings.flat_tol,
        settings.flat_fraction,
        REFINE_WIDTH,
    );
    let (theta, neg) = s.best();
    let min_support = -neg;
    if min_support >= -settings.flat_tol {
        return Crawford {
            value: 0.0,
            contains_origin: true,
            theta,
            min_support,
            nearest: None,
        };
    }
    let nearest = hermitian_eig(&rotated_real_part(b, theta))
        .ok()
        .map(|eig| b.quadratic_form(&eig.vector(0)));
    Crawford {
        value: -min_support,
        contains_origin: false,
        theta,
        min_support,
        nearest,
    }
}

/// Phases at which the support function reaches the numerical radius.
#[derive(Debug, Clone, PartialEq)]
pub struct Directions {
    /// Sorted phases in `[0, 2π)`. On a flat profile these are the grid
    /// samples of the maximal arc.
    pub thetas: Vec<f64>,
    pub flat: bool,
    /// The numerical radius.
    pub value: f64,
}

pub fn maximizing_directions(a: &Matrix, settings: &Settings) -> Result<Directions> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let s = sweep(a, settings);
    let step = TAU / s.samples.len() as f64;
    if s.flat {
        let value = s.best().1;
        let tol = settings.flat_tol * value.abs().max(1.0);
        let thetas = s.samples.iter().filter(|p| p.1 >= value - tol).map(|p| p.0).collect();
        return Ok(Directions {
            thetas,
            flat: true,
            value,
        });
    }

    let mut candidates: Vec<(f64, f64)> = s
        .refined
        .iter()
        .map(|&(theta, value)| polish_phase(a, theta, value))
        .collect();
    let value = candidates
        .iter()
        .chain(&s.samples)
        .map(|p| p.1)
        .fold(f64::NEG_INFINITY, f64::max);
    let tol = settings.flat_tol * value.abs().max(1.0);
    candidates.retain(|p| p.1 >= value - tol);
    candidates.sort_by(|p, q| p.0.total_cmp(&q.0));

    let mut clustered: Vec<(f64, f64)> = Vec::new();
    for c in candidates {
        match clustered.last_mut() {
            Some(last) if angle_distance(last.0, c.0) < step => {
                if c.1 > last.1 {
                    *last = c;
                }
            }
            _ => clustered.push(c),
        }
    }
    if clustered.len() > 1 {
        let first = clustered[0];
        let last = clustered[clustered.len() - 1];
        if angle_distance(first.0, last.0) < step {
            if last.1 > first.1 {
                clustered[0] = last;
            }
            clustered.pop();
            clustered.sort_by(|p, q| p.0.total_cmp(&q.0));
        }
    }
    Ok(Directions {
        thetas: clustered.into_iter().map(|p| p.0).collect(),
        flat: false,
        value,
    })
}

/// One-sided slopes `(g'(θ-), g'(θ+))`. With `E` the top eigenspace of
/// `Re(e^{iθ} a)` and `K = compress(-Im(e^{iθ} a), E)`, they are the extreme
/// eigenvalues of `K`.
fn support_slopes(a: &Matrix, theta: f64) -> Option<(f64, f64)> {
    let eig = hermitian_eig(&rotated_real_part(a, theta)).ok()?;
    let scale = eig.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let k = eig.top_cluster(CLUSTER_GAP * scale);
    let basis: Vec<Vec<C64>> = (0..k).map(|i| eig.vector(i)).collect();
    let slope = compress(&rotated_imag_part(a, theta).scale_real(-1.0), &basis).ok()?;
    let inner = hermitian_eig(&slope.hermitian_part()).ok()?;
    Some((inner.min(), inner.max()))
}

/// Sharpens a golden-section maximizer by bisecting on the sign of the
/// one-sided slopes.
fn polish_phase(a: &Matrix, theta: f64, value: f64) -> (f64, f64) {
    let (mut lo, mut hi) = (theta - POLISH_HALF_WIDTH, theta + POLISH_HALF_WIDTH);
    match (support_slopes(a, lo), support_slopes(a, hi)) {
        (Some((_, right)), Some((left, _))) if right > 0.0 && left < 0.0 => {}
        _ => return (theta, value),
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match support_slopes(a, mid) {
            Some((_, right)) if right > 0.0 => lo = mid,
            Some((left, _)) if left < 0.0 => hi = mid,
            _ => {
                lo = mid;
                hi = mid;
                break;
            }
        }
    }
    let mid = 0.5 * (lo + hi);
    let polished = support_value(a, mid);
    if polished >= value - 4.0 * f64::EPSILON * value.abs().max(1.0) {
        (wrap_angle(mid), polished.max(value))
    } else {
        (theta, value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c64, operator_norm};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn nilpotent() -> Matrix {
        Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    fn example_a() -> Matrix {
        Matrix::from_pairs(&[&[(0.0, 1.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 1.0)]]).unwrap()
    }

    /// Oracle: max |⟨a x, x⟩| over a dense parametrization of unit vectors in C².
    fn radius_oracle_2x2(a: &Matrix) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..=400 {
            let t = FRAC_PI_2 * i as f64 / 400.0;
            for j in 0..400 {
                let p = TAU * j as f64 / 400.0;
                let x = [c64(t.cos(), 0.0), C64::from_polar(t.sin(), p)];
                best = best.max(a.quadratic_form(&x).norm());
            }
        }
        best
    }

    #[test]
    fn support_value_examples() {
        for theta in [0.0, 0.7, 2.5, 4.0] {
            assert!((support_value(&Matrix::identity(3), theta) - theta.cos()).abs() < 1e-14);
            assert!((support_value(&nilpotent(), theta) - 0.5).abs() < 1e-14);
        }
        let h = Matrix::from_real_rows(&[&[1.0, 2.0], &[2.0, -1.0]]).unwrap();
        assert!((support_value(&h, 0.0) - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn numerical_radius_examples() {
        assert!((numerical_radius(&nilpotent()) - 0.5).abs() < 1e-12);
        assert!((numerical_radius(&example_a()) - 1.5).abs() < 1e-12);
        assert!((numerical_radius(&Matrix::real_diag(&[1.0, -2.0])) - 2.0).abs() < 1e-12);
        assert_eq!(numerical_radius(&Matrix::zeros(3)), 0.0);
        // The grid oracle is accurate to about 1e-5 at this resolution.
        assert!((radius_oracle_2x2(&example_a()) - 1.5).abs() < 1e-4);
    }

    #[test]
    fn profile_keeps_refined_maxima_on_top() {
        let a = Matrix::from_pairs(&[&[(1.0, 0.3), (0.2, -1.0)], &[(0.5, 0.5), (-0.7, 0.1)]]).unwrap();
        let p = support_profile(&a, &Settings::DEFAULT);
        assert_eq!(p.samples.len(), 2048);
        let raw = p.samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
        assert!(p.max() >= raw);
        for &(theta, g) in p.samples.iter().step_by(97) {
            let direct = hermitian_eig(&rotated_real_part(&a, theta)).unwrap().max();
            assert!((g - direct).abs() < 1e-10);
        }
    }

    #[test]
    fn boundary_examples() {
        let b = boundary_points(&Matrix::real_diag(&[1.0, 2.0]), 32).unwrap();
        for p in &b.points {
            assert!(p.z.im.abs() < 1e-12 && p.z.re >= 1.0 - 1e-12 && p.z.re <= 2.0 + 1e-12);
        }
        let b = boundary_points(&Matrix::identity(2), 4).unwrap();
        assert_eq!(b.points.len(), 4);
        assert!(b.points.iter().all(|p| (p.z - c64(1.0, 0.0)).norm() < 1e-14));
        let b = boundary_points(&nilpotent(), 16).unwrap();
        for p in &b.points {
            assert!((p.z.norm() - 0.5).abs() < 1e-12);
            assert!(((C64::from_polar(1.0, p.theta) * p.z).re - p.support).abs() < 1e-12);
        }
        assert!(boundary_points(&nilpotent(), 0).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = boundary_points(&Matrix::identity(1), 2).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "theta,re,im,support");
        assert_eq!(
            lines[1],
            "0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0"
        );
        let fields: Vec<f64> = lines[2].split(',').map(|f| f.parse().unwrap()).collect();
        assert_eq!(fields[0], PI);
    }

    #[test]
    fn crawford_examples() {
        assert!((crawford_number(&Matrix::identity(2)) - 1.0).abs() < 1e-12);
        assert_eq!(crawford_number(&nilpotent()), 0.0);
        let c = crawford_details(&Matrix::real_diag(&[1.0, 2.0]), &Settings::DEFAULT);
        assert!((c.value - 1.0).abs() < 1e-12);
        assert!((c.nearest.unwrap() - c64(1.0, 0.0)).norm() < 1e-9);
        // Off-center disk: W = 2 + disk(0, 1/2), distance 1.5.
        let shifted = &Matrix::identity(2).scale_real(2.0) + &nilpotent();
        assert!((crawford_number(&shifted) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn direction_examples() {
        let d = maximizing_directions(&Matrix::real_diag(&[2.0, 1.0]), &Settings::DEFAULT).unwrap();
        assert!(!d.flat);
        assert_eq!(d.thetas.len(), 1);
        assert!(angle_distance(d.thetas[0], 0.0) < 1e-9);
        assert!((d.value - 2.0).abs() < 1e-14);

        let d = maximizing_directions(&nilpotent(), &Settings::DEFAULT).unwrap();
        assert!(d.flat);
        assert_eq!(d.thetas.len(), 2048);

        let d = maximizing_directions(&Matrix::identity(2).scale(c64(0.0, 1.0)), &Settings::DEFAULT).unwrap();
        assert_eq!(d.thetas.len(), 1);
        assert!(angle_distance(d.thetas[0], 1.5 * PI) < 1e-9);

        assert_eq!(
            maximizing_directions(&Matrix::zeros(2), &Settings::DEFAULT),
            Err(Error::ZeroElement)
        );
    }

    #[test]
    fn two_separate_maxima_are_both_reported() {
        // Normal with eigenvalues ±2: g(θ) = 2|cos θ|, maxima at 0 and π.
        let d = maximizing_directions(&Matrix::real_diag(&[2.0, -2.0]), &Settings::DEFAULT).unwrap();
        assert_eq!(d.thetas.len(), 2);
        assert!(angle_distance(d.thetas[0], 0.0) < 1e-9);
        assert!(angle_distance(d.thetas[1], PI) < 1e-9);
    }

    #[test]
    fn polished_phase_zeroes_the_imaginary_part() {
        let a = Matrix::from_pairs(&[
            &[(3.0, 1.0), (0.4, -2.0), (1.0, 0.0)],
            &[(0.0, 0.5), (-1.0, 2.0), (0.3, 0.3)],
            &[(1.5, 0.0), (0.2, -0.1), (0.5, -2.5)],
        ])
        .unwrap();
        let d = maximizing_directions(&a, &Settings::DEFAULT).unwrap();
        for &theta in &d.thetas {
            let x = hermitian_eig(&rotated_real_part(&a, theta)).unwrap().vector(0);
            let w = C64::from_polar(1.0, theta) * a.quadratic_form(&x);
            assert!(w.im.abs() < 1e-9, "{}", w.im);
            assert!((w.re - d.value).abs() < 1e-9);
        }
        assert!(d.value <= operator_norm(&a) + 1e-12);
    }
}
