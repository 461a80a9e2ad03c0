use std::f64::consts::TAU;

use super::Norm;
use crate::matcore::{dot, gram, hermitian_eig, HermitianCombo, Matrix, C64};
use crate::optim::{angle_distance, ellipsoid_min};
use crate::range::support_profile;
use crate::settings::Settings;

const INNER_GAP: f64 = 1e-14;
const OUTER_GAP: f64 = 1e-13;
const MAX_ELLIPSOID_STEPS: usize = 4000;
const MAX_EXCHANGES: usize = 40;
const INITIAL_PHASES: usize = 16;
const MAX_FLAT_PHASES: usize = 64;
const NEWTON_STEPS: usize = 8;
const MAX_PHASE_STEP: f64 = 0.05;

/// Global minimum of the convex function `λ ↦ N(a + λ b)` over the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PencilMin {
    pub lambda: C64,
    pub value: f64,
    /// Certified lower bound on the minimum value.
    pub lower_bound: f64,
    /// Radius of the disk around the start that was searched.
    pub radius: f64,
}

/// Minimizes `N(a + λ b)` starting from a disk around the origin that
/// contains every minimizer: `N(a + λ b) ≥ |λ| N(b) - N(a)` forces
/// `|λ| ≤ 2 N(a) / N(b)`.
pub fn pencil_min(norm: Norm, a: &Matrix, b: &Matrix, settings: &Settings) -> PencilMin {
    let na = norm.value(a, settings);
    if b.is_zero() || na == 0.0 {
        return PencilMin {
            lambda: C64::new(0.0, 0.0),
            value: na,
            lower_bound: na,
            radius: 0.0,
        };
    }
    let reach = 2.0 * na / norm.value(b, settings);
    pencil_min_from(norm, a, b, settings, C64::new(0.0, 0.0), 2.0 * reach)
}

/// As [`pencil_min`] but searching the disk of `radius` around `center`,
/// which must contain a minimizer.
pub fn pencil_min_from(norm: Norm, a: &Matrix, b: &Matrix, settings: &Settings, center: C64, radius: f64) -> PencilMin {
    let na = norm.value(a, settings);
    if b.is_zero() || radius <= 0.0 {
        return PencilMin {
            lambda: C64::new(0.0, 0.0),
            value: na,
            lower_bound: na,
            radius,
        };
    }
    let (lambda, value, lower_bound) = match norm {
        Norm::Operator => {
            let r = ellipsoid_min(
                |p| operator_oracle(a, b, C64::new(p[0], p[1])),
                [center.re, center.im],
                radius,
                INNER_GAP * (1.0 + na),
                MAX_ELLIPSOID_STEPS,
            );
            (C64::new(r.point[0], r.point[1]), r.value, r.lower_bound)
        }
        Norm::NumericalRadius => radius_pencil(a, b, settings, center, radius, na),
    };
    // λ = 0 is always a candidate.
    let (lambda, value) = if na <= value {
        (C64::new(0.0, 0.0), na)
    } else {
        (lambda, value)
    };
    PencilMin {
        lambda,
        value,
        lower_bound: lower_bound.min(value),
        radius,
    }
}

/// `‖a + λ b‖` with the subgradient `(Re(u* b x), -Im(u* b x))` built from
/// the top singular pair.
fn operator_oracle(a: &Matrix, b: &Matrix, lambda: C64) -> (f64, [f64; 2]) {
    let m = a.add_scaled(lambda, b);
    let eig = hermitian_eig(&gram(&m)).expect("Gram matrix is Hermitian");
    let sigma = eig.max().max(0.0).sqrt();
    if sigma == 0.0 {
        return (0.0, [0.0, 0.0]);
    }
    let x = eig.vector(0);
    let u: Vec<C64> = m.apply(&x).iter().map(|z| z / sigma).collect();
    let z = dot(&b.apply(&x), &u);
    (sigma, [z.re, -z.im])
}

/// The pencil `Re(e^{iθ}(a + (s + it) b))` as a real combination of the
/// Hermitian and skew parts of `a` and `b`.
struct RotatedPencil {
    combo: HermitianCombo,
}

impl RotatedPencil {
    fn new(a: &Matrix, b: &Matrix) -> Self {
        RotatedPencil {
            combo: HermitianCombo::new(vec![
                a.hermitian_part(),
                a.skew_part(),
                b.hermitian_part(),
                b.skew_part(),
            ]),
        }
    }

    fn weights(theta: f64, p: [f64; 2]) -> [f64; 4] {
        let (sn, c) = theta.sin_cos();
        let (s, t) = (p[0], p[1]);
        [c, -sn, s * c - t * sn, -s * sn - t * c]
    }

    /// Derivative of [`Self::weights`] in `θ`.
    fn phase_derivative_weights(theta: f64, p: [f64; 2]) -> [f64; 4] {
        let (sn, c) = theta.sin_cos();
        let (s, t) = (p[0], p[1]);
        [-sn, -c, -s * sn - t * c, -s * c + t * sn]
    }

    /// Local maximizer of `θ ↦ λ_max` near `seed`, by Newton steps on the
    /// first two derivatives of a simple top eigenvalue.
    fn newton_phase(&self, seed: f64, p: [f64; 2]) -> f64 {
        let mut theta = seed;
        for _ in 0..NEWTON_STEPS {
            let Ok(eig) = hermitian_eig(&self.combo.matrix(&Self::weights(theta, p))) else {
                break;
            };
            let d = self.combo.matrix(&Self::phase_derivative_weights(theta, p));
            let x = eig.vector(0);
            let dx = d.apply(&x);
            let slope = dot(&dx, &x).re;
            let scale = eig.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
            // The second derivative of H in θ is -H.
            let mut curvature = -eig.max();
            let mut simple = true;
            for k in 1..eig.values.len() {
                let gap = eig.values[0] - eig.values[k];
                if gap <= 1e-10 * scale {
                    simple = false;
                    break;
                }
                curvature += 2.0 * dot(&dx, &eig.vector(k)).norm_sqr() / gap;
            }
            if !simple {
                break;
            }
            let step = if curvature < 0.0 {
                -slope / curvature
            } else {
                slope.signum() * MAX_PHASE_STEP
            };
            let step = step.clamp(-MAX_PHASE_STEP, MAX_PHASE_STEP);
            theta += step;
            if step.abs() < 1e-13 {
                break;
            }
        }
        theta
    }

    fn lambda_max(&mut self, theta: f64, p: [f64; 2]) -> f64 {
        self.combo.lambda_max(&Self::weights(theta, p))
    }

    /// Largest eigenvalue and its gradient in `(s, t)` at one phase.
    fn value_and_gradient(&self, theta: f64, p: [f64; 2]) -> (f64, [f64; 2]) {
        let eig = hermitian_eig(&self.combo.matrix(&Self::weights(theta, p))).expect("pencil is Hermitian");
        let x = eig.vector(0);
        let terms = self.combo.terms();
        let qa = terms[2].quadratic_form(&x).re;
        let qb = terms[3].quadratic_form(&x).re;
        let (sn, c) = theta.sin_cos();
        (eig.max(), [c * qa - sn * qb, -sn * qa - c * qb])
    }
}

/// Exact numerical radius of `a + λ b` and the phases where it is attained.
fn exact_radius(a: &Matrix, b: &Matrix, lambda: C64, settings: &Settings) -> (f64, Vec<f64>) {
    let m = a.add_scaled(lambda, b);
    let profile = support_profile(&m, settings);
    let value = profile.max().max(0.0);
    let phases = if profile.flat {
        let tol = settings.flat_tol * value.max(1.0);
        let arc: Vec<f64> = profile
            .samples
            .iter()
            .filter(|s| s.1 >= value - tol)
            .map(|s| s.0)
            .collect();
        let stride = arc.len().div_ceil(MAX_FLAT_PHASES).max(1);
        arc.into_iter().step_by(stride).collect()
    } else {
        profile.refined_maxima.iter().map(|r| r.0).collect()
    };
    (value, phases)
}

/// Exchange method: minimize the lower model `max_{θ ∈ S} λ_max(…)` by the
/// ellipsoid method, then add the phases where the exact radius is attained
/// at the model minimizer, until the model's lower bound meets an exact value.
/// The model also follows the latest maximizing phases by Newton steps, which
/// makes the exchange converge in a few rounds.
fn radius_pencil(a: &Matrix, b: &Matrix, settings: &Settings, center: C64, radius: f64, na: f64) -> (C64, f64, f64) {
    let mut pencil = RotatedPencil::new(a, b);
    let mut phases: Vec<f64> = (0..INITIAL_PHASES)
        .map(|k| TAU * k as f64 / INITIAL_PHASES as f64)
        .collect();
    let (_, start) = exact_radius(a, b, C64::new(0.0, 0.0), settings);
    add_phases(&mut phases, &start);

    let mut branches = start;
    let mut best = (C64::new(0.0, 0.0), na);
    let mut lower = f64::NEG_INFINITY;
    for _ in 0..MAX_EXCHANGES {
        let model = ellipsoid_min(
            |p| {
                let mut top = (f64::NEG_INFINITY, 0.0);
                for &seed in &branches {
                    let theta = pencil.newton_phase(seed, p);
                    let v = pencil.lambda_max(theta, p);
                    if v > top.0 {
                        top = (v, theta);
                    }
                }
                for &theta in &phases {
                    let v = pencil.lambda_max(theta, p);
                    if v > top.0 {
                        top = (v, theta);
                    }
                }
                pencil.value_and_gradient(top.1, p)
            },
            [center.re, center.im],
            radius,
            INNER_GAP * (1.0 + na),
            MAX_ELLIPSOID_STEPS,
        );
        lower = lower.max(model.lower_bound);
        let lambda = C64::new(model.point[0], model.point[1]);
        let (value, attained) = exact_radius(a, b, lambda, settings);
        if value < best.1 {
            best = (lambda, value);
        }
        if best.1 - lower <= OUTER_GAP * (1.0 + na) {
            break;
        }
        if !add_phases(&mut phases, &attained) {
            break;
        }
        branches = attained;
    }
    (best.0, best.1, lower)
}

/// Adds phases not already present; reports whether any was new.
fn add_phases(phases: &mut Vec<f64>, new: &[f64]) -> bool {
    let mut added = false;
    for &theta in new {
        if phases.iter().all(|&p| angle_distance(p, theta) > 1e-12) {
            phases.push(theta);
            added = true;
        }
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::{c64, operator_norm};
    use crate::range::numerical_radius;

    #[test]
    fn radius_examples() {
        let s = Settings::DEFAULT;
        let r = pencil_min(
            Norm::NumericalRadius,
            &Matrix::identity(2),
            &Matrix::real_diag(&[1.0, 2.0]),
            &s,
        );
        assert!((r.lambda - c64(-2.0 / 3.0, 0.0)).norm() < 1e-6, "{:?}", r);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-10);
        assert!(r.lower_bound <= r.value && r.value - r.lower_bound < 1e-9);

        let r = pencil_min(
            Norm::NumericalRadius,
            &Matrix::real_diag(&[2.0, 0.0]),
            &Matrix::identity(2),
            &s,
        );
        assert!((r.lambda - c64(-1.0, 0.0)).norm() < 1e-6, "{:?}", r);
        assert!((r.value - 1.0).abs() < 1e-10);

        let a = Matrix::from_pairs(&[&[(0.0, 1.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 1.0)]]).unwrap();
        let r = pencil_min(Norm::NumericalRadius, &a, &a, &s);
        assert!((r.lambda - c64(-1.0, 0.0)).norm() < 1e-6, "{:?}", r);
        assert!(r.value.abs() < 1e-9);
    }

    #[test]
    fn zero_direction_keeps_the_start() {
        let a = Matrix::real_diag(&[1.0, -3.0]);
        let r = pencil_min(Norm::Operator, &a, &Matrix::zeros(2), &Settings::DEFAULT);
        assert_eq!(r.lambda, c64(0.0, 0.0));
        assert_eq!(r.value, 3.0);
    }

    #[test]
    fn operator_examples() {
        let s = Settings::DEFAULT;
        let r = pencil_min(
            Norm::Operator,
            &Matrix::real_diag(&[1.0, 0.0]),
            &Matrix::real_diag(&[0.0, 1.0]),
            &s,
        );
        assert!((r.value - 1.0).abs() < 1e-12);
        // ‖I + λ diag(1,2)‖ = max(|1+λ|, |1+2λ|) as for the numerical radius.
        let r = pencil_min(
            Norm::Operator,
            &Matrix::identity(2),
            &Matrix::real_diag(&[1.0, 2.0]),
            &s,
        );
        assert!((r.value - 1.0 / 3.0).abs() < 1e-10);
    }

    /// Brute-force oracle on a polar grid around the reported minimizer.
    #[test]
    fn minimum_beats_a_local_grid() {
        let s = Settings::DEFAULT.with_grid(512);
        let a = Matrix::from_pairs(&[&[(1.0, 0.2), (0.5, -1.0)], &[(0.0, 0.3), (-0.4, 0.8)]]).unwrap();
        let b = Matrix::from_pairs(&[&[(0.2, 0.0), (1.0, 0.5)], &[(-0.7, 0.0), (0.9, -0.3)]]).unwrap();
        for norm in [Norm::Operator, Norm::NumericalRadius] {
            let r = pencil_min(norm, &a, &b, &s);
            for i in 1..=8 {
                for j in 0..16 {
                    let l = r.lambda + C64::from_polar(0.05 * i as f64, TAU * j as f64 / 16.0);
                    let value = match norm {
                        Norm::Operator => operator_norm(&a.add_scaled(l, &b)),
                        Norm::NumericalRadius => numerical_radius(&a.add_scaled(l, &b)),
                    };
                    assert!(value >= r.value - 1e-9);
                }
            }
        }
    }
}
