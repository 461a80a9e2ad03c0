use std::f64::consts::TAU;

use super::derivative::{rho_fd, FamilyImage};
use super::pencil::pencil_min;
use super::{Norm, OrthReport, Route, RouteCheck, Side};
use crate::error::{Error, Result};
use crate::matcore::{classify, Matrix, C64};
use crate::optim::{golden_min, wrap_angle};
use crate::range::{crawford_details, numerical_radius_with};
use crate::settings::Settings;
use crate::states::{maximizing_states_with, pure_state, Face};

const DIRECTION_TOL: f64 = 1e-7;
const RING_RADII: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 10.0];

/// Whether `v(a + r b) ≥ v(a)` for every `r ≥ 0`, decided by the sign of
/// `ρ₊(a, b)`.
pub fn direction_orthogonal(a: &Matrix, b: &Matrix, settings: &Settings) -> Result<OrthReport> {
    if a.is_zero() {
        return Ok(OrthReport::new(Route::Direction, 0.0, DIRECTION_TOL));
    }
    let fd = rho_fd(Norm::NumericalRadius, a, b, Side::Plus, settings);
    let mut report = OrthReport::new(Route::Direction, fd.value, DIRECTION_TOL);
    if report.decision {
        let family = maximizing_states_with(a, settings)?;
        let image = FamilyImage::new(&family, b, settings);
        let one = C64::new(1.0, 0.0);
        let ext = image.max(one, true);
        let (value, x) = image.witness(one, Side::Plus, &ext)?;
        report.witness_state = Some(pure_state(&x)?);
        report.witness_value = Some(value);
    }
    Ok(report)
}

/// Whether `v(a + λ b) ≥ v(a)` for every complex `λ`.
///
/// Decided per phase: `a ⊥ b` iff `ρ₊(a, e^{iθ} b) ≥ 0` for every `θ`. The
/// pencil minimum `min_λ v(a + λ b)` is computed as a second route; a clear
/// positive phase margin next to a clear pencil descent raises
/// [`Error::InconsistentRoutes`].
pub fn bj_orthogonal_v(a: &Matrix, b: &Matrix, settings: &Settings) -> Result<OrthReport> {
    let tol = settings.decision_tol;
    if a.is_zero() || b.is_zero() {
        let mut report = OrthReport::new(Route::PhaseDerivatives, 0.0, tol);
        report.minimizer = Some(C64::new(0.0, 0.0));
        return Ok(report);
    }
    let family = maximizing_states_with(a, settings)?;
    let image = FamilyImage::new(&family, b, settings);
    let rho = |theta: f64, refine: bool| image.max(C64::from_polar(1.0, theta), refine).value;

    let k = settings.orth_grid.max(4);
    let step = TAU / k as f64;
    let (worst_k, _) = (0..k)
        .map(|i| (i, rho(step * i as f64, false)))
        .fold((0, f64::INFINITY), |acc, c| if c.1 < acc.1 { c } else { acc });
    let center = step * worst_k as f64;
    let (theta, _) = golden_min(|t| rho(t, false), center - step, center + step, 1e-10);
    let worst_theta = if rho(theta, false) <= rho(center, false) {
        wrap_angle(theta)
    } else {
        center
    };
    let phase = C64::from_polar(1.0, worst_theta);
    let ext = image.max(phase, true);
    let mut margin = ext.value;

    let sampled = family.records.iter().any(|r| matches!(r.face, Face::Sampled(_)));
    if sampled && margin < -tol {
        let rotated = b.scale(phase);
        margin = rho_fd(Norm::NumericalRadius, a, &rotated, Side::Plus, settings).value;
    }

    let pencil = pencil_min(Norm::NumericalRadius, a, b, settings);
    let pencil_margin = pencil.value - family.radius;
    if margin > tol && pencil_margin < -tol {
        return Err(Error::InconsistentRoutes {
            derivative_margin: margin,
            pencil_margin,
        });
    }

    let mut report = OrthReport::new(Route::PhaseDerivatives, margin, tol);
    report.worst_theta = Some(worst_theta);
    report.minimizer = Some(pencil.lambda);
    report.checks.push(RouteCheck {
        route: Route::Pencil,
        norm: Norm::NumericalRadius,
        decision: pencil_margin >= -tol,
        margin: pencil_margin,
    });
    if report.decision {
        let (value, x) = image.witness(phase, Side::Plus, &ext)?;
        report.witness_state = Some(pure_state(&x)?);
        report.witness_value = Some(value);
    }
    Ok(report)
}

/// Whether `N(a + λ b) ≥ N(a)` for every complex `λ`, from the pencil minimum.
pub fn bj_orthogonal_generic(norm: Norm, a: &Matrix, b: &Matrix, settings: &Settings) -> OrthReport {
    let pencil = pencil_min(norm, a, b, settings);
    let margin = pencil.value - norm.value(a, settings);
    let mut report = OrthReport::new(Route::Pencil, margin, settings.decision_tol);
    report.minimizer = Some(pencil.lambda);
    report
}

/// For positive `a` and `b`: whether some state with `φ(a) = v(a)` has
/// `φ(b) = 0`. The margin is `-min φ(b)` over the maximizing states of `a`.
///
/// The verdicts of [`bj_orthogonal_v`] and of operator-norm orthogonality are
/// attached as checks.
pub fn positive_cone_orth(a: &Matrix, b: &Matrix, settings: &Settings) -> Result<OrthReport> {
    if !classify(a).positive || !classify(b).positive {
        return Err(Error::NotPositive);
    }
    let tol = settings.decision_tol;
    let mut report = if a.is_zero() {
        OrthReport::new(Route::PositiveCone, 0.0, tol)
    } else {
        let family = maximizing_states_with(a, settings)?;
        let image = FamilyImage::new(&family, b, settings);
        let one = C64::new(1.0, 0.0);
        let ext = image.min(one, true);
        let smallest = ext.value / family.radius;
        let mut report = OrthReport::new(Route::PositiveCone, -smallest, tol);
        let (_, x) = image.witness(one, Side::Minus, &ext)?;
        let witness = pure_state(&x)?;
        report.witness_value = Some(b.quadratic_form(witness.vector().expect("pure state")).re);
        if report.decision {
            report.witness_state = Some(witness);
        }
        report
    };
    let v = bj_orthogonal_v(a, b, settings)?;
    report.checks.push(RouteCheck {
        route: v.route,
        norm: Norm::NumericalRadius,
        decision: v.decision,
        margin: v.margin,
    });
    let op = bj_orthogonal_generic(Norm::Operator, a, b, settings);
    report.checks.push(RouteCheck {
        route: op.route,
        norm: Norm::Operator,
        decision: op.decision,
        margin: op.margin,
    });
    Ok(report)
}

/// Sampled check of `v²(a + λ b) ≥ v²(a) + |λ|² 𝒞²(b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PythagoreanReport {
    pub radius: f64,
    pub crawford: f64,
    pub samples: usize,
    /// Smallest `v²(a + λ b) - v²(a) - |λ|² 𝒞²(b)` over the samples.
    pub worst_slack: f64,
    pub worst_lambda: C64,
    /// Every sample within `1e-6 (1 + |λ|²)` of the inequality.
    pub holds: bool,
}

/// Samples `λ` on rings of radius 0.1, 0.5, 1, 2 and 10 with `angles` points
/// each. Requires `a ⊥ b` for the numerical radius.
pub fn pythagorean_check(a: &Matrix, b: &Matrix, angles: usize, settings: &Settings) -> Result<PythagoreanReport> {
    let va = numerical_radius_with(a, settings);
    if b.is_zero() {
        return Ok(PythagoreanReport {
            radius: va,
            crawford: 0.0,
            samples: 0,
            worst_slack: 0.0,
            worst_lambda: C64::new(0.0, 0.0),
            holds: true,
        });
    }
    let orth = bj_orthogonal_v(a, b, settings)?;
    if !orth.decision {
        return Err(Error::PreconditionViolated(format!(
            "elements are not orthogonal for the numerical radius (margin {:.3e})",
            orth.margin
        )));
    }
    let crawford = crawford_details(b, settings).value;
    let mut report = PythagoreanReport {
        radius: va,
        crawford,
        samples: 0,
        worst_slack: f64::INFINITY,
        worst_lambda: C64::new(0.0, 0.0),
        holds: true,
    };
    let angles = angles.max(1);
    for &r in &RING_RADII {
        for j in 0..angles {
            let lambda = C64::from_polar(r, TAU * j as f64 / angles as f64);
            let v = numerical_radius_with(&a.add_scaled(lambda, b), settings);
            let slack = v * v - va * va - r * r * crawford * crawford;
            report.samples += 1;
            if slack < report.worst_slack {
                report.worst_slack = slack;
                report.worst_lambda = lambda;
            }
            if slack < -1e-6 * (1.0 + r * r) {
                report.holds = false;
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::c64;
    use crate::settings::Verdict;
    use crate::states::evaluate;

    fn nilpotent() -> Matrix {
        Matrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap()
    }

    fn golden_root() -> f64 {
        1.0 + 5f64.sqrt()
    }

    fn pair_ab() -> (Matrix, Matrix) {
        let a = Matrix::from_pairs(&[&[(0.0, 1.0), (1.0, 0.0)], &[(0.0, 0.0), (0.0, 1.0)]]).unwrap();
        let b = Matrix::from_pairs(&[&[(0.0, -2.0), (0.0, 0.0)], &[(golden_root(), 0.0), (0.0, 0.0)]]).unwrap();
        (a, b)
    }

    fn pair_cd() -> (Matrix, Matrix) {
        let c = Matrix::from_pairs(&[&[(0.0, 0.0), (0.0, 0.0)], &[(0.0, 1.0), (0.0, 0.0)]]).unwrap();
        let d = Matrix::from_real_rows(&[&[1.0, 0.0], &[1.0, 2.0]]).unwrap();
        (c, d)
    }

    #[test]
    fn direction_examples() {
        let s = Settings::DEFAULT;
        let e1 = Matrix::real_diag(&[1.0, 0.0]);
        let r = direction_orthogonal(&e1, &e1, &s).unwrap();
        assert!(r.decision);
        assert!((r.witness_value.unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            r.witness_state.unwrap().vector().unwrap(),
            &[c64(1.0, 0.0), c64(0.0, 0.0)]
        );

        let r = direction_orthogonal(&e1, &Matrix::real_diag(&[-1.0, 0.0]), &s).unwrap();
        assert!(!r.decision);
        assert!(r.witness_state.is_none());

        assert!(
            direction_orthogonal(&Matrix::identity(2), &nilpotent(), &s)
                .unwrap()
                .decision
        );
        assert!(
            direction_orthogonal(&Matrix::zeros(2), &nilpotent(), &s)
                .unwrap()
                .decision
        );
    }

    #[test]
    fn radius_orthogonality_examples() {
        let s = Settings::DEFAULT;
        let (c, d) = pair_cd();
        let r = bj_orthogonal_v(&c, &d, &s).unwrap();
        assert!(r.decision);
        let w = r.witness_state.as_ref().unwrap();
        let theta = r.worst_theta.unwrap();
        let value = (C64::from_polar(1.0, theta) * evaluate(w, &c).unwrap().conj() * evaluate(w, &d).unwrap()).re;
        assert!(value >= -1e-6);

        let (a, b) = pair_ab();
        let r = bj_orthogonal_v(&a, &b, &s).unwrap();
        assert!(!r.decision);
        assert_eq!(r.verdict, Verdict::False);
        assert!(!r.checks[0].decision);

        assert!(
            bj_orthogonal_v(&Matrix::identity(2), &nilpotent(), &s)
                .unwrap()
                .decision
        );
    }

    #[test]
    fn operator_orthogonality_examples() {
        let s = Settings::DEFAULT;
        let (c, d) = pair_cd();
        assert!(!bj_orthogonal_generic(Norm::Operator, &c, &d, &s).decision);
        let r = bj_orthogonal_generic(
            Norm::Operator,
            &Matrix::real_diag(&[1.0, 0.0]),
            &Matrix::real_diag(&[0.0, 1.0]),
            &s,
        );
        assert!(r.decision);
        // With the sign of the lower-left entry of b flipped the pair is
        // operator-norm orthogonal; as printed it is not.
        let (a, b) = pair_ab();
        assert!(!bj_orthogonal_generic(Norm::Operator, &a, &b, &s).decision);
        let flipped = Matrix::from_pairs(&[&[(0.0, -2.0), (0.0, 0.0)], &[(-golden_root(), 0.0), (0.0, 0.0)]]).unwrap();
        let r = bj_orthogonal_generic(Norm::Operator, &a, &flipped, &s);
        assert!(r.decision, "{}", r.margin);
        assert!(!bj_orthogonal_v(&a, &flipped, &s).unwrap().decision);
    }

    #[test]
    fn positive_cone_examples() {
        let s = Settings::DEFAULT;
        let e1 = Matrix::real_diag(&[1.0, 0.0]);
        let e2 = Matrix::real_diag(&[0.0, 1.0]);
        let r = positive_cone_orth(&e1, &e2, &s).unwrap();
        assert!(r.decision);
        assert_eq!(
            r.witness_state.unwrap().vector().unwrap(),
            &[c64(1.0, 0.0), c64(0.0, 0.0)]
        );
        assert!(r.checks.iter().all(|c| c.decision));

        let r = positive_cone_orth(&e1, &e1, &s).unwrap();
        assert!(!r.decision);
        assert!(r.checks.iter().all(|c| !c.decision));

        let r = positive_cone_orth(&Matrix::identity(2), &Matrix::real_diag(&[0.5, 2.0]), &s).unwrap();
        assert!(!r.decision);
        assert!((r.margin + 0.5).abs() < 1e-9);

        assert_eq!(positive_cone_orth(&nilpotent(), &e1, &s), Err(Error::NotPositive));
    }

    #[test]
    fn pythagorean_examples() {
        let s = Settings::DEFAULT;
        let r = pythagorean_check(
            &Matrix::real_diag(&[1.0, -1.0]),
            &Matrix::real_diag(&[1.0, 2.0]),
            32,
            &s,
        )
        .unwrap();
        assert!(r.holds);
        assert_eq!(r.samples, 160);
        assert!((r.crawford - 1.0).abs() < 1e-12);
        assert!(r.worst_slack >= -1e-9);

        let r = pythagorean_check(&Matrix::identity(2), &nilpotent(), 32, &s).unwrap();
        assert!(r.holds);
        assert_eq!(r.crawford, 0.0);

        let r = pythagorean_check(&Matrix::identity(2), &Matrix::zeros(2), 32, &s).unwrap();
        assert!(r.holds && r.samples == 0);

        let e1 = Matrix::real_diag(&[1.0, 0.0]);
        assert!(matches!(
            pythagorean_check(&e1, &Matrix::real_diag(&[-1.0, 0.0]), 8, &s),
            Err(Error::PreconditionViolated(_))
        ));
    }
}
