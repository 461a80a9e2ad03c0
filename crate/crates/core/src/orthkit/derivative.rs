use std::f64::consts::TAU;

use super::{Method, Norm, Side};
use crate::error::{Error, Result};
use crate::matcore::{Matrix, C64};
use crate::optim::golden_max;
use crate::settings::Settings;
use crate::states::{maximizing_states_with, pure_state, FaceImage, MaximizingFamily, State};

const FD_STEPS: i32 = 8;
const FD_AGREEMENT: f64 = 1e-6;

/// One-sided norm derivative `ρ±(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Derivative {
    pub side: Side,
    pub value: f64,
    pub method: Method,
    /// `(t, quotient)` pairs for finite differences; empty for the state formula.
    pub trace: Vec<(f64, f64)>,
    /// False when successive difference quotients never settled.
    pub converged: bool,
    /// For the state formula: whether the maximizing family was exhaustive.
    pub exhaustive: bool,
    /// For the state formula: a maximizing state attaining the extremum.
    pub witness: Option<State>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DerivativePair {
    pub rho_plus: f64,
    pub rho_minus: f64,
    pub method: Method,
    pub t_trace: Vec<(f64, f64)>,
    pub converged: bool,
}

/// `ρ±(x, y)` from the difference quotients `N(x)(N(x + t y) - N(x)) / t` at
/// `t = ±10^-1, …, ±10^-8`.
pub fn rho_fd(norm: Norm, x: &Matrix, y: &Matrix, side: Side, settings: &Settings) -> Derivative {
    let mut out = Derivative {
        side,
        value: 0.0,
        method: Method::FiniteDifference,
        trace: Vec::new(),
        converged: true,
        exhaustive: true,
        witness: None,
    };
    if x.is_zero() {
        return out;
    }
    let nx = norm.value(x, settings);
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    out.converged = false;
    for k in 1..=FD_STEPS {
        let t = sign * 10f64.powi(-k);
        let q = nx * (norm.value(&x.add_scaled(C64::new(t, 0.0), y), settings) - nx) / t;
        let settled = out
            .trace
            .last()
            .is_some_and(|&(_, prev)| (q - prev).abs() < FD_AGREEMENT);
        out.trace.push((t, q));
        out.value = q;
        if settled {
            out.converged = true;
            break;
        }
    }
    out
}

/// Both one-sided derivatives by the chosen method.
pub fn derivative_pair(
    norm: Norm,
    x: &Matrix,
    y: &Matrix,
    method: Method,
    settings: &Settings,
) -> Result<DerivativePair> {
    match method {
        Method::FiniteDifference => {
            let plus = rho_fd(norm, x, y, Side::Plus, settings);
            let minus = rho_fd(norm, x, y, Side::Minus, settings);
            let mut t_trace = plus.trace;
            t_trace.extend(minus.trace);
            Ok(DerivativePair {
                rho_plus: plus.value,
                rho_minus: minus.value,
                method,
                t_trace,
                converged: plus.converged && minus.converged,
            })
        }
        Method::StateFormula => {
            if norm != Norm::NumericalRadius {
                return Err(Error::PreconditionViolated(
                    "the state formula applies to the numerical radius only".into(),
                ));
            }
            let plus = rho_v_state_formula(x, y, Side::Plus, settings)?;
            let minus = rho_v_state_formula(x, y, Side::Minus, settings)?;
            Ok(DerivativePair {
                rho_plus: plus.value,
                rho_minus: minus.value,
                method,
                t_trace: Vec::new(),
                converged: true,
            })
        }
    }
}

/// `ρ₊(a, b) = max Re(conj(φ(a)) φ(b))` and `ρ₋(a, b) = min …` over the
/// states with `|φ(a)| = v(a)`.
pub fn rho_v_state_formula(a: &Matrix, b: &Matrix, side: Side, settings: &Settings) -> Result<Derivative> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroElement);
    }
    let family = maximizing_states_with(a, settings)?;
    let image = FamilyImage::new(&family, b, settings);
    let one = C64::new(1.0, 0.0);
    let ext = match side {
        Side::Plus => image.max(one, true),
        Side::Minus => image.min(one, true),
    };
    let (_, x) = image.witness(one, side, &ext)?;
    Ok(Derivative {
        side,
        value: ext.value,
        method: Method::StateFormula,
        trace: Vec::new(),
        converged: true,
        exhaustive: family.exhaustive,
        witness: Some(pure_state(&x)?),
    })
}

/// Extremum of `Re(p conj(φ(a)) φ(b))` over a maximizing family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Extreme {
    pub value: f64,
    pub theta_star: f64,
    pub record: usize,
}

/// The images `φ(b)` of every face of a maximizing family of `a`.
pub(crate) struct FamilyImage<'a> {
    family: &'a MaximizingFamily,
    b: &'a Matrix,
    images: Vec<FaceImage>,
    step: f64,
}

impl<'a> FamilyImage<'a> {
    pub fn new(family: &'a MaximizingFamily, b: &'a Matrix, settings: &Settings) -> Self {
        FamilyImage {
            family,
            b,
            images: family.records.iter().map(|r| r.face.image(b)).collect(),
            step: TAU / settings.grid.max(3) as f64,
        }
    }

    /// Largest `Re(p conj(φ(a)) φ(b))`. On a flat family the phase `θ*` is
    /// refined between grid records when `refine` is set.
    pub fn max(&self, p: C64, refine: bool) -> Extreme {
        let v = self.family.radius;
        let mut best = Extreme {
            value: f64::NEG_INFINITY,
            theta_star: 0.0,
            record: 0,
        };
        for (i, (r, img)) in self.family.records.iter().zip(&self.images).enumerate() {
            let value = v * img.max_re(p * C64::from_polar(1.0, r.theta));
            if value > best.value {
                best = Extreme {
                    value,
                    theta_star: r.theta,
                    record: i,
                };
            }
        }
        if refine && self.family.flat {
            let center = best.theta_star;
            let (theta, value) = golden_max(
                |t| match self.family.face_at(t) {
                    Ok(face) => v * face.image(self.b).max_re(p * C64::from_polar(1.0, t)),
                    Err(_) => f64::NEG_INFINITY,
                },
                center - self.step,
                center + self.step,
                1e-10,
            );
            if value > best.value {
                best.value = value;
                best.theta_star = theta;
            }
        }
        best
    }

    pub fn min(&self, p: C64, refine: bool) -> Extreme {
        let mut e = self.max(-p, refine);
        e.value = -e.value;
        e
    }

    /// A unit vector attaining `ext` and the value it gives.
    pub fn witness(&self, p: C64, side: Side, ext: &Extreme) -> Result<(f64, Vec<C64>)> {
        let record = &self.family.records[ext.record];
        let face = if record.theta == ext.theta_star {
            record.face.clone()
        } else {
            self.family.face_at(ext.theta_star)?
        };
        let q = p * C64::from_polar(1.0, ext.theta_star);
        let v = self.family.radius;
        Ok(match side {
            Side::Plus => {
                let (value, x) = face.argmax_re(self.b, q);
                (v * value, x)
            }
            Side::Minus => {
                let (value, x) = face.argmin_re(self.b, q);
                (v * value, x)
            }
        })
    }
}
