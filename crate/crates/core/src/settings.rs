//! Grid sizes and tolerances shared by the analysis routines.

/// Tunable resolution and tolerance parameters.
///
/// Every routine that sweeps the support function or decides an orthogonality
/// relation takes a `Settings`; [`Settings::DEFAULT`] holds the documented
/// defaults.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    /// Number of uniform angles used to sample the support function.
    pub grid: usize,
    /// Number of rotation angles tested by the per-angle orthogonality route.
    pub orth_grid: usize,
    /// Dead zone around every orthogonality margin.
    pub decision_tol: f64,
    /// Accepted deviation of a maximizing witness from the numerical radius.
    pub witness_tol: f64,
    /// Samples within this distance of the maximum count towards a flat profile.
    pub flat_tol: f64,
    /// Fraction of flat samples above which the profile is reported as flat.
    pub flat_fraction: f64,
}

impl Settings {
    pub const DEFAULT: Settings = Settings {
        grid: 2048,
        orth_grid: 256,
        decision_tol: 1e-6,
        witness_tol: 1e-7,
        flat_tol: 1e-9,
        flat_fraction: 0.25,
    };

    pub fn with_grid(mut self, grid: usize) -> Self {
        self.grid = grid;
        self
    }

    pub fn with_decision_tol(mut self, tol: f64) -> Self {
        self.decision_tol = tol;
        self
    }
}

impl Default for Settings {
    fn default() -> Self {
        Self::DEFAULT
    }
}

/// Three-valued outcome of a margin compared against the dead zone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    Marginal,
}

impl Verdict {
    pub fn from_margin(margin: f64, tol: f64) -> Self {
        if margin > tol {
            Verdict::True
        } else if margin < -tol {
            Verdict::False
        } else {
            Verdict::Marginal
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::True => "true",
            Verdict::False => "false",
            Verdict::Marginal => "marginal",
        }
    }
}
