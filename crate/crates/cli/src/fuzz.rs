//! Seeded invariant fuzzer. Every trial draws its matrices from a ChaCha
//! stream seeded with `seed + trial`, so the summary depends only on the
//! arguments.

use std::fmt::Write;

use numrad::approx::{best_approximation, uniqueness_certificate};
use numrad::matcore::{adjoint, classify, hermitian_eig, operator_norm};
use numrad::orthkit::{
    bj_orthogonal_generic, bj_orthogonal_v, positive_cone_orth, pythagorean_check, rho_fd, rho_v_state_formula, Norm,
    Side,
};
use numrad::range::{boundary_points, crawford_number, numerical_radius_with};
use numrad::sample::{gaussian_matrix, random_matrix, MatrixClass};
use numrad::states::{evaluate, maximizing_states_with, random_state};
use numrad::triangle::{refined_bound, triangle_equality_two};
use numrad::{Error, Matrix, Settings, Verdict, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::matrix_file::MatrixFile;

/// Outcome of one invariant on one trial. Margins are signed slacks:
/// nonnegative means the invariant held with room to spare.
enum Check {
    Pass(f64),
    Fail {
        margin: f64,
        detail: String,
        matrices: Vec<Matrix>,
    },
    /// Inside the decision dead zone; logged, not judged.
    Marginal,
    Skip,
}

fn judge(margin: f64, slack: f64, detail: impl FnOnce() -> String, matrices: &[&Matrix]) -> Check {
    if margin >= -slack {
        Check::Pass(margin)
    } else {
        Check::Fail {
            margin,
            detail: detail(),
            matrices: matrices.iter().map(|m| (*m).clone()).collect(),
        }
    }
}

struct Trial<'a> {
    dim: usize,
    class: MatrixClass,
    rng: ChaCha8Rng,
    settings: &'a Settings,
}

impl Trial<'_> {
    fn draw(&mut self, class: MatrixClass) -> Matrix {
        loop {
            let m = random_matrix(class, self.dim, &mut self.rng);
            if !m.is_zero() {
                return m;
            }
        }
    }

    fn element(&mut self) -> Matrix {
        self.draw(self.class)
    }

    fn general(&mut self) -> Matrix {
        gaussian_matrix(self.dim, &mut self.rng)
    }

    fn v(&self, a: &Matrix) -> f64 {
        numerical_radius_with(a, self.settings)
    }
}

/// `b0 - φ(b0) e` for a maximizing pure state `φ` of `a`; then `a ⊥ b`.
fn annihilated(a: &Matrix, b0: &Matrix, settings: &Settings) -> Result<Matrix, Error> {
    let family = maximizing_states_with(a, settings)?;
    let x = family.records[0].witnesses[0].vector().expect("pure witness").to_vec();
    Ok(b0.add_scaled(-b0.quadratic_form(&x), &Matrix::identity(a.dim())))
}

type Invariant = fn(&mut Trial) -> Result<Check, Error>;

const INVARIANTS: &[(&str, Invariant)] = &[
    ("norm_sandwich", norm_sandwich),
    ("normal_radius_is_norm", normal_radius),
    ("square_zero_radius_is_half_norm", square_zero_radius),
    ("radius_adjoint_invariance", adjoint_invariance),
    ("radius_rotation_invariance", rotation_invariance),
    ("eigen_reconstruction", eigen_reconstruction),
    ("crawford_perturbed_identity", crawford_perturbed_identity),
    ("boundary_inside_radius_disk", boundary_inside_disk),
    ("maximizing_witness_modulus", maximizing_witness_modulus),
    ("random_state_bound", random_state_bound),
    ("derivative_bounds", derivative_bounds),
    ("derivative_homogeneity", derivative_homogeneity),
    ("derivative_shift", derivative_shift),
    ("state_formula_agreement", state_formula_agreement),
    ("route_consistency", route_consistency),
    ("orthogonality_symmetries", orthogonality_symmetries),
    ("positive_cone_coincidence", positive_cone_coincidence),
    ("normal_orthogonality_implication", normal_implication),
    ("square_zero_orthogonality_implication", square_zero_implication),
    ("pythagorean_inequality", pythagorean),
    ("best_approximation", best_approx),
    ("refined_bound_sandwich", refined_sandwich),
    ("triangle_equality_witness", triangle_witness),
];

fn norm_sandwich(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let (v, op) = (t.v(&a), operator_norm(&a));
    let margin = (v - 0.5 * op).min(op - v);
    Ok(judge(margin, 1e-8, || format!("v = {v:e}, norm = {op:e}"), &[&a]))
}

fn normal_radius(t: &mut Trial) -> Result<Check, Error> {
    let a = t.draw(MatrixClass::Normal);
    let (v, op) = (t.v(&a), operator_norm(&a));
    Ok(judge(
        -(v - op).abs(),
        1e-8,
        || format!("v = {v:e}, norm = {op:e}"),
        &[&a],
    ))
}

fn square_zero_radius(t: &mut Trial) -> Result<Check, Error> {
    if t.dim < 2 {
        return Ok(Check::Skip);
    }
    let a = t.draw(MatrixClass::NilpotentSquare);
    let (v, op) = (t.v(&a), operator_norm(&a));
    Ok(judge(
        -(v - 0.5 * op).abs(),
        1e-7,
        || format!("v = {v:e}, norm = {op:e}"),
        &[&a],
    ))
}

fn adjoint_invariance(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let (v, w) = (t.v(&a), t.v(&adjoint(&a)));
    Ok(judge(
        -(v - w).abs(),
        1e-9 * (1.0 + v),
        || format!("v(a) = {v:e}, v(a*) = {w:e}"),
        &[&a],
    ))
}

fn rotation_invariance(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let theta = t.rng.random_range(0.0..std::f64::consts::TAU);
    let (v, w) = (t.v(&a), t.v(&a.scale(C64::from_polar(1.0, theta))));
    Ok(judge(
        -(v - w).abs(),
        1e-9 * (1.0 + v),
        || format!("θ = {theta}, {v:e} vs {w:e}"),
        &[&a],
    ))
}

fn eigen_reconstruction(t: &mut Trial) -> Result<Check, Error> {
    let h = t.element().hermitian_part();
    let eig = hermitian_eig(&h)?;
    let back = &(&eig.vectors * &Matrix::real_diag(&eig.values)) * &adjoint(&eig.vectors);
    let err = operator_norm(&(&back - &h));
    Ok(judge(
        -err,
        1e-9 * (1.0 + operator_norm(&h)),
        || format!("residual {err:e}"),
        &[&h],
    ))
}

fn crawford_perturbed_identity(t: &mut Trial) -> Result<Check, Error> {
    let s0 = t.element();
    let target = t.rng.random_range(0.0..0.9);
    let s = s0.scale_real(target / t.v(&s0));
    let vs = t.v(&s);
    let b = &Matrix::identity(t.dim) + &s;
    let c = crawford_number(&b);
    Ok(judge(
        c - (1.0 - vs),
        1e-7,
        || format!("𝒞 = {c:e}, v(s) = {vs:e}"),
        &[&s],
    ))
}

fn boundary_inside_disk(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let v = t.v(&a);
    let top = boundary_points(&a, 128)?
        .points
        .iter()
        .map(|p| p.z.norm())
        .fold(0.0, f64::max);
    Ok(judge(v - top, 1e-8, || format!("max |z| = {top:e}, v = {v:e}"), &[&a]))
}

fn maximizing_witness_modulus(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let family = maximizing_states_with(&a, t.settings)?;
    let v = t.v(&a);
    let mut worst: f64 = 0.0;
    for w in family.records.iter().flat_map(|r| &r.witnesses) {
        worst = worst.max((evaluate(w, &a)?.norm() - v).abs());
    }
    if family.records.is_empty() {
        worst = f64::INFINITY;
    }
    Ok(judge(
        -worst,
        1e-7,
        || format!("largest modulus defect {worst:e}"),
        &[&a],
    ))
}

fn random_state_bound(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let seed = t.rng.random();
    let z = evaluate(&random_state(t.dim, seed), &a)?;
    let v = t.v(&a);
    Ok(judge(
        v - z.norm(),
        1e-8,
        || format!("|φ(a)| = {:e}, v = {v:e}", z.norm()),
        &[&a],
    ))
}

fn rho(t: &Trial, x: &Matrix, y: &Matrix, side: Side) -> f64 {
    rho_fd(Norm::NumericalRadius, x, y, side, t.settings).value
}

fn derivative_bounds(t: &mut Trial) -> Result<Check, Error> {
    let (x, y) = (t.element(), t.general());
    let (p, m) = (rho(t, &x, &y, Side::Plus), rho(t, &x, &y, Side::Minus));
    let bound = t.v(&x) * t.v(&y);
    let margin = (p - m).min(bound - p.abs()).min(bound - m.abs());
    Ok(judge(
        margin,
        1e-6 * (1.0 + bound),
        || format!("ρ₊ = {p:e}, ρ₋ = {m:e}, v(x)v(y) = {bound:e}"),
        &[&x, &y],
    ))
}

fn derivative_homogeneity(t: &mut Trial) -> Result<Check, Error> {
    let (x, y) = (t.element(), t.general());
    let mut alpha = t.rng.random_range(0.2..5.0);
    if t.rng.random::<bool>() {
        alpha = -alpha;
    }
    let ax = x.scale_real(alpha);
    let mut worst = f64::INFINITY;
    for (side, mirror) in [(Side::Plus, Side::Minus), (Side::Minus, Side::Plus)] {
        let expected = alpha * rho(t, &x, &y, if alpha > 0.0 { side } else { mirror });
        let got = rho(t, &ax, &y, side);
        worst = worst.min(1e-5 * expected.abs().max(1.0) - (got - expected).abs());
    }
    Ok(judge(worst, 0.0, || format!("α = {alpha}"), &[&x, &y]))
}

fn derivative_shift(t: &mut Trial) -> Result<Check, Error> {
    let (x, y) = (t.element(), t.general());
    let alpha = t.rng.random_range(-2.0..2.0);
    let v = t.v(&x);
    let shifted = y.add_scaled(C64::new(alpha, 0.0), &x);
    let mut worst = f64::INFINITY;
    for side in [Side::Plus, Side::Minus] {
        let rhs = alpha * v * v + rho(t, &x, &y, side);
        worst = worst.min(1e-5 * (1.0 + rhs.abs()) - (rho(t, &x, &shifted, side) - rhs).abs());
    }
    Ok(judge(worst, 0.0, || format!("α = {alpha}"), &[&x, &y]))
}

fn state_formula_agreement(t: &mut Trial) -> Result<Check, Error> {
    let (a, b) = (t.element(), t.general());
    if !maximizing_states_with(&a, t.settings)?.exhaustive {
        return Ok(Check::Skip);
    }
    let mut worst: f64 = 0.0;
    for side in [Side::Plus, Side::Minus] {
        let formula = rho_v_state_formula(&a, &b, side, t.settings)?.value;
        worst = worst.max((formula - rho(t, &a, &b, side)).abs());
    }
    Ok(judge(
        1e-4 - worst,
        0.0,
        || format!("largest difference {worst:e}"),
        &[&a, &b],
    ))
}

/// Every third trial uses a direction annihilated by a maximizing state.
fn pair(t: &mut Trial) -> Result<(Matrix, Matrix, bool), Error> {
    let a = t.element();
    let b0 = t.general();
    if t.rng.random_range(0..3) == 0 {
        let b = annihilated(&a, &b0, t.settings)?;
        Ok((a, b, true))
    } else {
        Ok((a, b0, false))
    }
}

fn route_consistency(t: &mut Trial) -> Result<Check, Error> {
    let (a, b, orthogonal) = pair(t)?;
    let tol = t.settings.decision_tol;
    let r = match bj_orthogonal_v(&a, &b, t.settings) {
        Err(Error::InconsistentRoutes {
            derivative_margin,
            pencil_margin,
        }) => {
            return Ok(Check::Fail {
                margin: pencil_margin,
                detail: format!("derivative margin {derivative_margin:e}, pencil margin {pencil_margin:e}"),
                matrices: vec![a, b],
            })
        }
        other => other?,
    };
    let pencil = r.checks[0];
    if orthogonal {
        let margin = r.margin.min(pencil.margin);
        return Ok(judge(
            margin,
            tol,
            || format!("constructed orthogonal pair rejected: {margin:e}"),
            &[&a, &b],
        ));
    }
    let gap = r.margin.abs().min(pencil.margin.abs());
    if r.decision == pencil.decision {
        return Ok(Check::Pass(gap));
    }
    if gap <= tol {
        return Ok(Check::Marginal);
    }
    Ok(Check::Fail {
        margin: -gap,
        detail: format!("derivative margin {:e}, pencil margin {:e}", r.margin, pencil.margin),
        matrices: vec![a, b],
    })
}

fn orthogonality_symmetries(t: &mut Trial) -> Result<Check, Error> {
    let (a, b, _) = pair(t)?;
    let base = bj_orthogonal_v(&a, &b, t.settings)?;
    if base.verdict == Verdict::Marginal && !base.decision {
        return Ok(Check::Marginal);
    }
    let alpha = C64::from_polar(t.rng.random_range(0.2..5.0), t.rng.random_range(0.0..std::f64::consts::TAU));
    let beta = C64::from_polar(t.rng.random_range(0.2..5.0), t.rng.random_range(0.0..std::f64::consts::TAU));
    for (name, other) in [
        ("adjoint", bj_orthogonal_v(&adjoint(&a), &adjoint(&b), t.settings)?),
        ("scaling", bj_orthogonal_v(&a.scale(alpha), &b.scale(beta), t.settings)?),
    ] {
        if other.verdict != Verdict::Marginal && other.decision != base.decision {
            return Ok(Check::Fail {
                margin: -other.margin.abs(),
                detail: format!(
                    "{name}: base margin {:e}, transformed margin {:e}",
                    base.margin, other.margin
                ),
                matrices: vec![a, b],
            });
        }
    }
    Ok(Check::Pass(base.margin.abs()))
}

fn positive_cone_coincidence(t: &mut Trial) -> Result<Check, Error> {
    let a = t.draw(MatrixClass::Positive);
    let b0 = t.draw(MatrixClass::Positive);
    let b = if t.rng.random::<bool>() {
        let x = hermitian_eig(&a)?.vector(0);
        let n = t.dim;
        let q = Matrix::new(
            n,
            (0..n * n)
                .map(|k| {
                    let (i, j) = (k / n, k % n);
                    C64::new(if i == j { 1.0 } else { 0.0 }, 0.0) - x[i] * x[j].conj()
                })
                .collect(),
        )?;
        (&(&q * &b0) * &q).hermitian_part()
    } else {
        b0
    };
    if !classify(&b).positive {
        return Ok(Check::Skip);
    }
    let tol = t.settings.decision_tol;
    let cone = positive_cone_orth(&a, &b, t.settings)?;
    let verdicts = [
        (cone.decision, cone.margin),
        (cone.checks[0].decision, cone.checks[0].margin),
        (cone.checks[1].decision, cone.checks[1].margin),
    ];
    if verdicts
        .iter()
        .any(|&(_, m)| Verdict::from_margin(m, tol) == Verdict::Marginal)
        && !verdicts.iter().all(|v| v.0)
    {
        return Ok(Check::Marginal);
    }
    let agree = verdicts.iter().all(|v| v.0 == verdicts[0].0);
    let spread = verdicts.iter().map(|v| v.1.abs()).fold(f64::INFINITY, f64::min);
    Ok(judge(
        if agree { spread } else { -spread.max(tol * 2.0) },
        0.0,
        || format!("cone {:?}, v {:?}, op {:?}", verdicts[0], verdicts[1], verdicts[2]),
        &[&a, &b],
    ))
}

fn normal_implication(t: &mut Trial) -> Result<Check, Error> {
    let a = t.draw(MatrixClass::Normal);
    let b0 = t.general();
    let b = if t.rng.random::<bool>() {
        annihilated(&a, &b0, t.settings)?
    } else {
        b0
    };
    let v = bj_orthogonal_v(&a, &b, t.settings)?;
    if !v.decision {
        return Ok(Check::Pass(0.0));
    }
    let op = bj_orthogonal_generic(Norm::Operator, &a, &b, t.settings);
    Ok(judge(
        op.margin,
        t.settings.decision_tol,
        || format!("v margin {:e}, op margin {:e}", v.margin, op.margin),
        &[&a, &b],
    ))
}

fn square_zero_implication(t: &mut Trial) -> Result<Check, Error> {
    if t.dim < 2 {
        return Ok(Check::Skip);
    }
    let a = t.draw(MatrixClass::NilpotentSquare);
    let b = t.general();
    let op = bj_orthogonal_generic(Norm::Operator, &a, &b, t.settings);
    if !op.decision {
        return Ok(Check::Pass(0.0));
    }
    let v = bj_orthogonal_v(&a, &b, t.settings)?;
    Ok(judge(
        v.margin,
        t.settings.decision_tol,
        || format!("op margin {:e}, v margin {:e}", op.margin, v.margin),
        &[&a, &b],
    ))
}

fn pythagorean(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let b0 = t.general();
    let b = annihilated(&a, &b0, t.settings)?;
    let r = match pythagorean_check(&a, &b, 8, t.settings) {
        Err(Error::PreconditionViolated(_)) => return Ok(Check::Marginal),
        other => other?,
    };
    Ok(judge(
        if r.holds { r.worst_slack.max(0.0) } else { r.worst_slack },
        0.0,
        || format!("worst slack {:e} at λ = {}", r.worst_slack, r.worst_lambda),
        &[&a, &b],
    ))
}

fn best_approx(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let s0 = t.general();
    let target = t.rng.random_range(0.0..0.9);
    let b = &Matrix::identity(t.dim) + &s0.scale_real(target / t.v(&s0));
    let r = best_approximation(&a, &b, t.settings)?;
    if !r.unique {
        return Ok(Check::Fail {
            margin: -r.restarts_agreement,
            detail: format!("restarts spread {:e}, 𝒞(b) = {:e}", r.restarts_agreement, r.crawford_b),
            matrices: vec![a, b],
        });
    }
    let sep = uniqueness_certificate(&a, &b, &r, t.settings)?;
    if !sep.holds || !sep.strictly_better {
        return Ok(Check::Fail {
            margin: sep.worst_slack,
            detail: format!("separation slack {:e} at η = {}", sep.worst_slack, sep.worst_eta),
            matrices: vec![a, b],
        });
    }
    let residual = a.add_scaled(r.zeta, &b);
    let orth = bj_orthogonal_v(&residual, &b, t.settings)?;
    Ok(judge(
        orth.margin,
        t.settings.decision_tol,
        || format!("residual margin {:e}", orth.margin),
        &[&a, &b],
    ))
}

fn refined_sandwich(t: &mut Trial) -> Result<Check, Error> {
    let (a, b) = (t.element(), t.general());
    let r = refined_bound(&a, &b, t.settings);
    let sum = t.v(&(&a + &b));
    let margin = (r.bound - sum).min(r.va + r.vb - r.bound);
    Ok(judge(
        margin,
        1e-6,
        || format!("v(a+b) = {sum:e}, bound = {:e}", r.bound),
        &[&a, &b],
    ))
}

/// `b = μ a + ε Q p Q` with `Q` the projection away from a maximizing vector
/// `x` of `a`; whenever `x` still maximizes `b`, the triangle equality holds.
fn triangle_witness(t: &mut Trial) -> Result<Check, Error> {
    let a = t.element();
    let n = t.dim;
    let family = maximizing_states_with(&a, t.settings)?;
    let x = family.records[0].witnesses[0].vector().expect("pure witness").to_vec();
    let q = Matrix::new(
        n,
        (0..n * n)
            .map(|k| {
                let (i, j) = (k / n, k % n);
                C64::new(if i == j { 1.0 } else { 0.0 }, 0.0) - x[i] * x[j].conj()
            })
            .collect(),
    )?;
    let mu = t.rng.random_range(0.3..3.0);
    let p = &(&q * &t.general()) * &q;
    let b = a.scale_real(mu).add_scaled(C64::new(0.05, 0.0), &p);
    let (va, vb) = (t.v(&a), t.v(&b));
    let product = a.quadratic_form(&x).conj() * b.quadratic_form(&x);
    let witnessed = (product - C64::new(va * vb, 0.0)).norm() <= 1e-9 * (1.0 + va * vb);
    let r = triangle_equality_two(&a, &b, t.settings)?;
    if witnessed && !r.equal {
        return Ok(Check::Fail {
            margin: r.lhs - r.rhs,
            detail: format!("witnessed equality missed: lhs {:e}, rhs {:e}", r.lhs, r.rhs),
            matrices: vec![a, b],
        });
    }
    if !r.equal {
        return Ok(Check::Skip);
    }
    let defect = r.witness_defect.unwrap_or(0.0);
    if !witnessed && defect > 1e-5 {
        // Inside the equality band without being exactly extremal.
        return Ok(Check::Marginal);
    }
    Ok(judge(
        1e-5 - defect,
        0.0,
        || format!("witness defect {defect:e}"),
        &[&a, &b],
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub trial: usize,
    pub dim: usize,
    pub class: String,
    pub detail: String,
    pub matrices: Vec<MatrixFile>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantSummary {
    pub name: String,
    pub passes: usize,
    pub failures: usize,
    pub marginal: usize,
    pub skipped: usize,
    /// Smallest signed slack over judged trials.
    pub worst_margin: Option<f64>,
    pub marginal_trials: Vec<usize>,
    pub first_counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Serialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub dims: Vec<usize>,
    pub trials: usize,
    pub invariants: Vec<InvariantSummary>,
    pub all_passed: bool,
}

pub fn run(dims: &[usize], trials: usize, seed: u64, settings: &Settings) -> FuzzSummary {
    run_invariants(INVARIANTS, dims, trials, seed, settings)
}

fn run_invariants(
    invariants: &[(&str, Invariant)],
    dims: &[usize],
    trials: usize,
    seed: u64,
    settings: &Settings,
) -> FuzzSummary {
    let mut summaries: Vec<InvariantSummary> = invariants
        .iter()
        .map(|(name, _)| InvariantSummary {
            name: name.to_string(),
            passes: 0,
            failures: 0,
            marginal: 0,
            skipped: 0,
            worst_margin: None,
            marginal_trials: Vec::new(),
            first_counterexample: None,
        })
        .collect();
    for trial in 0..trials {
        let dim = dims[trial % dims.len()];
        let class = MatrixClass::ALL[(trial / dims.len()) % MatrixClass::ALL.len()];
        let trial_seed = seed.wrapping_add(trial as u64);
        for (k, ((_, check), summary)) in invariants.iter().zip(summaries.iter_mut()).enumerate() {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            rng.set_stream(k as u64);
            let mut t = Trial {
                dim,
                class: if class == MatrixClass::NilpotentSquare && dim < 2 {
                    MatrixClass::General
                } else {
                    class
                },
                rng,
                settings,
            };
            let outcome = check(&mut t).unwrap_or_else(|e| Check::Fail {
                margin: f64::NEG_INFINITY,
                detail: format!("error: {e}"),
                matrices: Vec::new(),
            });
            let mut record = |m: f64| summary.worst_margin = Some(summary.worst_margin.map_or(m, |w: f64| w.min(m)));
            match outcome {
                Check::Pass(m) => {
                    record(m);
                    summary.passes += 1;
                }
                Check::Fail {
                    margin,
                    detail,
                    matrices,
                } => {
                    record(margin);
                    summary.failures += 1;
                    if summary.first_counterexample.is_none() {
                        summary.first_counterexample = Some(Counterexample {
                            trial,
                            dim,
                            class: class.to_string(),
                            detail,
                            matrices: matrices.iter().map(MatrixFile::from_matrix).collect(),
                        });
                    }
                }
                Check::Marginal => {
                    summary.marginal += 1;
                    summary.marginal_trials.push(trial);
                }
                Check::Skip => summary.skipped += 1,
            }
        }
    }
    let all_passed = summaries.iter().all(|s| s.failures == 0);
    FuzzSummary {
        seed,
        dims: dims.to_vec(),
        trials,
        invariants: summaries,
        all_passed,
    }
}

impl FuzzSummary {
    /// 0 when every invariant held, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_passed {
            0
        } else {
            3
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summaries always serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let dims: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        let _ = writeln!(
            out,
            "fuzz seed {} dims {} trials {}",
            self.seed,
            dims.join(","),
            self.trials
        );
        for s in &self.invariants {
            let worst = s.worst_margin.map_or("n/a".to_string(), |w| format!("{w:e}"));
            let _ = writeln!(
                out,
                "{:<40} pass {:>4}  fail {:>4}  marginal {:>3}  skipped {:>4}  worst margin {worst}",
                s.name, s.passes, s.failures, s.marginal, s.skipped
            );
            if !s.marginal_trials.is_empty() {
                let list: Vec<String> = s.marginal_trials.iter().map(|t| t.to_string()).collect();
                let _ = writeln!(out, "  marginal trials: {}", list.join(","));
            }
            if let Some(c) = &s.first_counterexample {
                let _ = writeln!(
                    out,
                    "  first counterexample: trial {} dim {} class {}: {}",
                    c.trial, c.dim, c.class, c.detail
                );
                for (i, m) in c.matrices.iter().enumerate() {
                    let _ = writeln!(out, "  matrix {i}: {}", m.to_json());
                }
            }
        }
        let _ = writeln!(
            out,
            "result: {}",
            if self.all_passed {
                "all invariants hold"
            } else {
                "invariant failures"
            }
        );
        out
    }
}
