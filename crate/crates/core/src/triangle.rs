//! Equality cases of the triangle inequality for the numerical radius, and
//! the refined upper bound on `v(a + b)`.

use crate::error::{Error, Result};
use crate::matcore::{operator_norm, rotated_real_part, Matrix, C64};
use crate::optim::sweep_max;
use crate::range::numerical_radius_with;
use crate::settings::Settings;
use crate::states::{evaluate, maximizing_states_with, State};

/// Relative tolerance on `v(a + b) = v(a) + v(b)`.
pub const EQUALITY_TOL: f64 = 1e-6;
/// Relative tolerance on the witness equations.
pub const WITNESS_TOL: f64 = 1e-5;

const REFINE_WIDTH: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EqualityReport {
    pub equal: bool,
    /// Radius of the sum.
    pub lhs: f64,
    /// Sum of the radii.
    pub rhs: f64,
    pub witness_state: Option<State>,
    /// `φ(x) / v(x)` for each summand at the witness.
    pub ratio_check: Option<Vec<C64>>,
    /// `conj(φ(x)) φ(y)` for each pair of summands at the witness.
    pub products: Option<Vec<C64>>,
    /// Largest relative defect of the witness equations.
    pub witness_defect: Option<f64>,
    /// `sup_θ ‖Re(e^{iθ} a) Re(e^{iθ} b)‖`, two summands only.
    pub sup_product: Option<f64>,
    /// Whether the supremum above equals `v(a) v(b)`.
    pub sup_product_holds: Option<bool>,
    /// Whether the witness satisfies every equation.
    pub verified: bool,
}

fn equal_within(lhs: f64, rhs: f64) -> bool {
    (lhs - rhs).abs() <= EQUALITY_TOL * (1.0 + rhs)
}

pub fn triangle_equality_two(a: &Matrix, b: &Matrix, settings: &Settings) -> Result<EqualityReport> {
    let va = numerical_radius_with(a, settings);
    let vb = numerical_radius_with(b, settings);
    let sum = a.add_scaled(C64::new(1.0, 0.0), b);
    let lhs = numerical_radius_with(&sum, settings);
    let rhs = va + vb;
    let mut report = EqualityReport {
        equal: equal_within(lhs, rhs),
        lhs,
        rhs,
        witness_state: None,
        ratio_check: None,
        products: None,
        witness_defect: None,
        sup_product: None,
        sup_product_holds: None,
        verified: true,
    };
    if !report.equal || a.is_zero() || b.is_zero() {
        return Ok(report);
    }
    attach_witness(&mut report, &sum, &[a, b], &[va, vb], settings)?;
    let sup = sup_product(a, b, settings);
    report.sup_product = Some(sup);
    report.sup_product_holds = Some((sup - va * vb).abs() <= EQUALITY_TOL * (1.0 + va * vb));
    Ok(report)
}

pub fn triangle_equality_three(a: &Matrix, b: &Matrix, c: &Matrix, settings: &Settings) -> Result<EqualityReport> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::ZeroElement);
    }
    let radii = [a, b, c].map(|x| numerical_radius_with(x, settings));
    let sum = a.add_scaled(C64::new(1.0, 0.0), b).add_scaled(C64::new(1.0, 0.0), c);
    let lhs = numerical_radius_with(&sum, settings);
    let rhs = radii.iter().sum();
    let mut report = EqualityReport {
        equal: equal_within(lhs, rhs),
        lhs,
        rhs,
        witness_state: None,
        ratio_check: None,
        products: None,
        witness_defect: None,
        sup_product: None,
        sup_product_holds: None,
        verified: true,
    };
    if report.equal {
        attach_witness(&mut report, &sum, &[a, b, c], &radii, settings)?;
    }
    Ok(report)
}

/// Picks the maximizing state of `sum` that best satisfies
/// `|φ(x)| = v(x)`, equal ratios `φ(x)/v(x)` and `conj(φ(x)) φ(y) = v(x) v(y)`.
fn attach_witness(
    report: &mut EqualityReport,
    sum: &Matrix,
    parts: &[&Matrix],
    radii: &[f64],
    settings: &Settings,
) -> Result<()> {
    let family = maximizing_states_with(sum, settings)?;
    let mut best: Option<(f64, State, Vec<C64>, Vec<C64>)> = None;
    for state in family.records.iter().flat_map(|r| &r.witnesses) {
        let values = parts.iter().map(|x| evaluate(state, x)).collect::<Result<Vec<_>>>()?;
        let ratios: Vec<C64> = values.iter().zip(radii).map(|(z, v)| z / v).collect();
        let mut products = Vec::new();
        let mut defect: f64 = 0.0;
        for r in &ratios {
            defect = defect.max((r.norm() - 1.0).abs()).max((r - ratios[0]).norm());
        }
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                let p = values[i].conj() * values[j];
                let target = radii[i] * radii[j];
                defect = defect.max((p - target).norm() / (1.0 + target));
                products.push(p);
            }
        }
        if best.as_ref().is_none_or(|b| defect < b.0) {
            best = Some((defect, state.clone(), ratios, products));
        }
    }
    match best {
        Some((defect, state, ratios, products)) => {
            report.witness_state = Some(state);
            report.ratio_check = Some(ratios);
            report.products = Some(products);
            report.witness_defect = Some(defect);
            report.verified = defect <= WITNESS_TOL;
        }
        None => report.verified = false,
    }
    Ok(())
}

/// `sup_θ ‖Re(e^{iθ} a) Re(e^{iθ} b)‖` by a grid sweep with local refinement.
pub fn sup_product(a: &Matrix, b: &Matrix, settings: &Settings) -> f64 {
    if a.is_zero() || b.is_zero() {
        return 0.0;
    }
    let f = |t: f64| operator_norm(&(&rotated_real_part(a, t) * &rotated_real_part(b, t)));
    let lipschitz = 2.0 * a.frobenius_norm() * b.frobenius_norm();
    sweep_max(f, settings.grid, lipschitz, 0.0, 1.0, REFINE_WIDTH).best().1
}

/// Upper bound on `v(a + b)` refining the triangle inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedBound {
    pub bound: f64,
    pub sup_product: f64,
    pub va: f64,
    pub vb: f64,
}

/// `½(v(a) + v(b)) + ½ √((v(a) - v(b))² + 4 sup_θ ‖Re(e^{iθ} a) Re(e^{iθ} b)‖)`.
pub fn refined_bound(a: &Matrix, b: &Matrix, settings: &Settings) -> RefinedBound {
    let va = numerical_radius_with(a, settings);
    let vb = numerical_radius_with(b, settings);
    let sup = sup_product(a, b, settings);
    let bound = 0.5 * (va + vb) + 0.5 * ((va - vb).powi(2) + 4.0 * sup).sqrt();
    RefinedBound {
        bound,
        sup_product: sup,
        va,
        vb,
    }
}
