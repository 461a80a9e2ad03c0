//! Small derivative-free and subgradient optimizers used by the sweeps and
//! the pencil minimization.

use std::f64::consts::TAU;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`.
///
/// Returns the best interior point visited. The search shrinks the bracket
/// until it is narrower than `width`.
pub(crate) fn golden_max<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let mut guard = 0;
    while b - a > width && guard < 200 {
        guard += 1;
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
            if f1 > best.1 {
                best = (x1, f1);
            }
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
            if f2 > best.1 {
                best = (x2, f2);
            }
        }
    }
    best
}

pub(crate) fn golden_min<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, width: f64) -> (f64, f64) {
    let (x, v) = golden_max(|t| -f(t), lo, hi, width);
    (x, -v)
}

/// Maps an angle into `[0, 2π)`.
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// Distance between two angles on the circle.
pub(crate) fn angle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Result of a uniform sweep of a periodic function followed by local
/// refinement of its maxima.
#[derive(Debug, Clone)]
pub(crate) struct SweepMax {
    pub samples: Vec<(f64, f64)>,
    pub refined: Vec<(f64, f64)>,
    pub flat: bool,
}

impl SweepMax {
    pub fn best(&self) -> (f64, f64) {
        self.samples
            .iter()
            .chain(&self.refined)
            .copied()
            .fold((0.0, f64::NEG_INFINITY), |acc, s| if s.1 > acc.1 { s } else { acc })
    }
}

/// Samples the 2π-periodic `f` on `grid` uniform angles and refines every
/// local maximum that could still beat the grid maximum, given that `f` is
/// `lipschitz`-continuous.
///
/// When at least `flat_fraction` of the samples are within `flat_tol` of the
/// maximum the profile is flagged flat and only the top sample is refined.
pub(crate) fn sweep_max<F: FnMut(f64) -> f64>(
    mut f: F,
    grid: usize,
    lipschitz: f64,
    flat_tol: f64,
    flat_fraction: f64,
    refine_width: f64,
) -> SweepMax {
    let grid = grid.max(3);
    let step = TAU / grid as f64;
    let samples: Vec<(f64, f64)> = (0..grid)
        .map(|k| {
            let theta = k as f64 * step;
            (theta, f(theta))
        })
        .collect();
    let top = samples.iter().map(|s| s.1).fold(f64::NEG_INFINITY, f64::max);
    let flat_count = samples.iter().filter(|s| s.1 >= top - flat_tol).count();
    let flat = flat_count as f64 >= flat_fraction * grid as f64;

    let slack = lipschitz.abs() * step + flat_tol;
    let mut candidates: Vec<usize> = if flat {
        let k = samples.iter().position(|s| s.1 == top).expect("maximum sample exists");
        vec![k]
    } else {
        (0..grid)
            .filter(|&k| {
                let prev = samples[(k + grid - 1) % grid].1;
                let next = samples[(k + 1) % grid].1;
                let here = samples[k].1;
                here > prev && here >= next && here >= top - slack
            })
            .collect()
    };
    if candidates.is_empty() {
        // Constant up to rounding: refine around the first top sample.
        candidates.push(samples.iter().position(|s| s.1 == top).unwrap_or(0));
    }
    candidates.sort_by(|&p, &q| samples[q].1.total_cmp(&samples[p].1).then(p.cmp(&q)));
    candidates.truncate(32);

    let refined = candidates
        .into_iter()
        .map(|k| {
            let center = samples[k].0;
            let (theta, value) = golden_max(&mut f, center - step, center + step, refine_width);
            if value >= samples[k].1 {
                (wrap_angle(theta), value)
            } else {
                samples[k]
            }
        })
        .collect();
    SweepMax { samples, refined, flat }
}

/// Outcome of [`ellipsoid_min`].
#[derive(Debug, Clone, Copy)]
pub(crate) struct EllipsoidResult {
    pub point: [f64; 2],
    pub value: f64,
    pub lower_bound: f64,
}

/// Central-cut ellipsoid method for a convex function of two real variables.
///
/// `oracle` returns the value and a subgradient. The initial ellipsoid is the
/// disk of `radius` around `center`, which must contain a minimizer; the
/// returned lower bound is valid under that assumption. Stops once the gap
/// between the best value and the lower bound is at most `gap_tol`.
pub(crate) fn ellipsoid_min<F: FnMut([f64; 2]) -> (f64, [f64; 2])>(
    mut oracle: F,
    center: [f64; 2],
    radius: f64,
    gap_tol: f64,
    max_iter: usize,
) -> EllipsoidResult {
    let mut c = center;
    let r2 = radius * radius;
    let mut p = [r2, 0.0, r2];
    let mut best = (c, f64::INFINITY);
    let mut lower = f64::NEG_INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let (value, g) = oracle(c);
        if value < best.1 {
            best = (c, value);
        }
        let pg = [p[0] * g[0] + p[1] * g[1], p[1] * g[0] + p[2] * g[1]];
        let gpg = g[0] * pg[0] + g[1] * pg[1];
        if !(gpg > 0.0) || !gpg.is_finite() {
            // Zero subgradient: the center is a minimizer.
            lower = lower.max(value);
            break;
        }
        let root = gpg.sqrt();
        lower = lower.max(value - root);
        if best.1 - lower <= gap_tol {
            break;
        }
        let d = [pg[0] / root, pg[1] / root];
        c = [c[0] - d[0] / 3.0, c[1] - d[1] / 3.0];
        let k = 4.0 / 3.0;
        p = [
            k * (p[0] - 2.0 / 3.0 * d[0] * d[0]),
            k * (p[1] - 2.0 / 3.0 * d[0] * d[1]),
            k * (p[2] - 2.0 / 3.0 * d[1] * d[1]),
        ];
        let det = p[0] * p[2] - p[1] * p[1];
        if !(det > 0.0) {
            break;
        }
    }
    EllipsoidResult {
        point: best.0,
        value: best.1,
        lower_bound: lower,
    }
}
