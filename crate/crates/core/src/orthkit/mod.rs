//! Norm derivatives and Birkhoff–James orthogonality for the operator norm
//! and the numerical radius.

mod decide;
mod derivative;
mod pencil;

use crate::matcore::{operator_norm, Matrix, C64};
use crate::range::numerical_radius_with;
use crate::settings::{Settings, Verdict};
use crate::states::State;

pub use decide::{
    bj_orthogonal_generic, bj_orthogonal_v, direction_orthogonal, positive_cone_orth, pythagorean_check,
    PythagoreanReport,
};
pub use derivative::{derivative_pair, rho_fd, rho_v_state_formula, Derivative, DerivativePair};
pub use pencil::{pencil_min, pencil_min_from, PencilMin};

/// The two norms on the matrix algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Norm {
    Operator,
    NumericalRadius,
}

impl Norm {
    pub fn value(self, a: &Matrix, settings: &Settings) -> f64 {
        match self {
            Norm::Operator => operator_norm(a),
            Norm::NumericalRadius => numerical_radius_with(a, settings),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Norm::Operator => "op",
            Norm::NumericalRadius => "v",
        }
    }
}

pub fn norm_value(norm: Norm, a: &Matrix) -> f64 {
    norm.value(a, &Settings::DEFAULT)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Plus,
    Minus,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Plus => "plus",
            Side::Minus => "minus",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    FiniteDifference,
    StateFormula,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::FiniteDifference => "finite_difference",
            Method::StateFormula => "state_formula",
        }
    }
}

/// Which characterization produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// `ρ₊(a, e^{iθ} b) ≥ 0` for every phase `θ`.
    PhaseDerivatives,
    /// `min_λ N(a + λ b) ≥ N(a)`.
    Pencil,
    /// `ρ₊(a, b) ≥ 0`, i.e. no descent along positive multiples of `b`.
    Direction,
    /// A maximizing state of `a` annihilating `b`.
    PositiveCone,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::PhaseDerivatives => "phase_derivatives",
            Route::Pencil => "pencil",
            Route::Direction => "direction",
            Route::PositiveCone => "positive_cone",
        }
    }
}

/// A secondary decider's verdict on the same question.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RouteCheck {
    pub route: Route,
    pub norm: Norm,
    pub decision: bool,
    pub margin: f64,
}

/// Outcome of an orthogonality decision.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthReport {
    pub decision: bool,
    pub verdict: Verdict,
    /// Signed slack of the deciding inequality; nonnegative up to the
    /// tolerance when `decision` holds.
    pub margin: f64,
    pub route: Route,
    pub witness_state: Option<State>,
    /// Value of the witness inequality at the witness state.
    pub witness_value: Option<f64>,
    pub worst_theta: Option<f64>,
    pub minimizer: Option<C64>,
    pub checks: Vec<RouteCheck>,
}

impl OrthReport {
    fn new(route: Route, margin: f64, tol: f64) -> Self {
        OrthReport {
            decision: margin >= -tol,
            verdict: Verdict::from_margin(margin, tol),
            margin,
            route,
            witness_state: None,
            witness_value: None,
            worst_theta: None,
            minimizer: None,
            checks: Vec::new(),
        }
    }
}
