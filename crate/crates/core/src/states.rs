//! States on the matrix algebra and the family of states attaining the
//! numerical radius.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matcore::{
    compress, dot, fix_phase, hermitian_eig, lambda_max_in_place, rotated_imag_part, rotated_real_part, vector_norm,
    Matrix, C64,
};
use crate::range::maximizing_directions;
use crate::settings::Settings;

const UNIT_TOL: f64 = 1e-12;
/// Relative width of the top eigenvalue cluster taken as the eigenspace `E`.
const EIGENSPACE_TOL: f64 = 1e-8;
const SPHERE_SAMPLES: usize = 256;
const SPHERE_SEED: u64 = 0x6e75_6d72_6164;

/// A state, either a vector state `a ↦ ⟨a x, x⟩` or a density matrix
/// `a ↦ trace(ρ a)`.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(Vec<C64>),
    Density(Matrix),
}

impl State {
    pub fn dim(&self) -> usize {
        match self {
            State::Pure(x) => x.len(),
            State::Density(rho) => rho.dim(),
        }
    }

    pub fn vector(&self) -> Option<&[C64]> {
        match self {
            State::Pure(x) => Some(x),
            State::Density(_) => None,
        }
    }

    /// The density matrix `x x*` or `ρ` itself.
    pub fn density(&self) -> Matrix {
        match self {
            State::Pure(x) => {
                let n = x.len();
                let mut data = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        data.push(x[i] * x[j].conj());
                    }
                }
                Matrix::new(n, data).expect("outer product of a finite vector")
            }
            State::Density(rho) => rho.clone(),
        }
    }
}

/// `φ(a)`: `⟨a x, x⟩` for a pure state, `trace(ρ a)` for a density matrix.
pub fn evaluate(phi: &State, a: &Matrix) -> Result<C64> {
    if phi.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: phi.dim(),
        });
    }
    Ok(match phi {
        State::Pure(x) => a.quadratic_form(x),
        State::Density(rho) => rho.matmul(a).trace(),
    })
}

/// Normalizes `x` and fixes its phase.
pub fn pure_state(x: &[C64]) -> Result<State> {
    let norm = vector_norm(x);
    if norm == 0.0 || !norm.is_finite() {
        return Err(Error::ZeroVector);
    }
    let mut v: Vec<C64> = x.iter().map(|z| z / norm).collect();
    fix_phase(&mut v);
    Ok(State::Pure(v))
}

/// Validates a density matrix: Hermitian, positive semidefinite, unit trace.
pub fn density_state(rho: Matrix) -> Result<State> {
    let eig = hermitian_eig(&rho)?;
    if eig.min() < -UNIT_TOL {
        return Err(Error::NotPositive);
    }
    let trace = rho.trace();
    if (trace - C64::new(1.0, 0.0)).norm() > UNIT_TOL {
        return Err(Error::PreconditionViolated(format!("density trace {trace} is not 1")));
    }
    Ok(State::Density(rho))
}

fn gaussian_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// Pure state from a standard complex Gaussian vector, deterministic in `seed`.
pub fn random_state(n: usize, seed: u64) -> State {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let x = gaussian_vector(n, &mut rng);
        if let Ok(state) = pure_state(&x) {
            return state;
        }
    }
}

/// The set of unit vectors `x` with `⟨a x, x⟩ = v(a) e^{-iθ*}` for one phase `θ*`.
#[derive(Debug, Clone, PartialEq)]
pub enum Face {
    /// A single vector, up to phase.
    Point(Vec<C64>),
    /// The vectors `u + e^{iψ} w`, `ψ` real, with `u ⊥ w`.
    Circle { u: Vec<C64>, w: Vec<C64> },
    /// Every unit vector in the span of an orthonormal basis.
    Subspace(Vec<Vec<C64>>),
    /// Points and circles sampled from a face of dimension three or more.
    Sampled(Vec<Face>),
}

/// The values `φ(b)` over a face, in a form that supports fast extremization
/// of `Re(p φ(b))` for unimodular `p`.
#[derive(Debug, Clone, PartialEq)]
pub enum FaceImage {
    Point(C64),
    /// `φ(b) = c0 + c1 e^{iψ} + c2 e^{-iψ}`.
    Circle {
        c0: C64,
        c1: C64,
        c2: C64,
    },
    /// Compression of `b` to the subspace.
    Subspace(Matrix),
    Union(Vec<FaceImage>),
}

impl FaceImage {
    /// `max Re(p φ(b))` over the face.
    pub fn max_re(&self, p: C64) -> f64 {
        match self {
            FaceImage::Point(z) => (p * z).re,
            FaceImage::Circle { c0, c1, c2 } => (p * c0).re + (p * c1 + (p * c2).conj()).norm(),
            FaceImage::Subspace(m) => {
                let mut h = rotated_real_part(m, p.arg());
                let k = h.dim();
                lambda_max_in_place(h.as_mut_slice(), k)
            }
            FaceImage::Union(parts) => parts.iter().map(|f| f.max_re(p)).fold(f64::NEG_INFINITY, f64::max),
        }
    }

    /// `min Re(p φ(b))` over the face.
    pub fn min_re(&self, p: C64) -> f64 {
        -self.max_re(-p)
    }
}

impl Face {
    pub fn is_exact(&self) -> bool {
        matches!(self, Face::Point(_) | Face::Circle { .. } | Face::Subspace(_))
    }

    /// A few unit vectors from the face.
    pub fn representatives(&self) -> Vec<Vec<C64>> {
        match self {
            Face::Point(x) => vec![x.clone()],
            Face::Circle { u, w } => [
                C64::new(1.0, 0.0),
                C64::new(0.0, 1.0),
                C64::new(-1.0, 0.0),
                C64::new(0.0, -1.0),
            ]
            .iter()
            .map(|&e| combine(u, e, w))
            .collect(),
            Face::Subspace(basis) => basis.clone(),
            Face::Sampled(parts) => parts
                .iter()
                .flat_map(|f| f.representatives().into_iter().take(1))
                .collect(),
        }
    }

    pub fn image(&self, b: &Matrix) -> FaceImage {
        match self {
            Face::Point(x) => FaceImage::Point(b.quadratic_form(x)),
            Face::Circle { u, w } => {
                let bu = b.apply(u);
                let bw = b.apply(w);
                FaceImage::Circle {
                    c0: dot(&bu, u) + dot(&bw, w),
                    c1: dot(&bw, u),
                    c2: dot(&bu, w),
                }
            }
            Face::Subspace(basis) => FaceImage::Subspace(compress(b, basis).expect("face basis is orthonormal")),
            Face::Sampled(parts) => FaceImage::Union(parts.iter().map(|f| f.image(b)).collect()),
        }
    }

    /// A unit vector of the face maximizing `Re(p ⟨b x, x⟩)`, with that value.
    pub fn argmax_re(&self, b: &Matrix, p: C64) -> (f64, Vec<C64>) {
        match self {
            Face::Point(x) => ((p * b.quadratic_form(x)).re, x.clone()),
            Face::Circle { u, w } => {
                let FaceImage::Circle { c0, c1, c2 } = self.image(b) else {
                    unreachable!("circle image")
                };
                let s = p * c1 + (p * c2).conj();
                let e = if s.norm() > 0.0 {
                    (s / s.norm()).conj()
                } else {
                    C64::new(1.0, 0.0)
                };
                ((p * c0).re + s.norm(), combine(u, e, w))
            }
            Face::Subspace(basis) => {
                let m = compress(b, basis).expect("face basis is orthonormal");
                let eig = hermitian_eig(&rotated_real_part(&m, p.arg())).expect("rotated part is Hermitian");
                let y = eig.vector(0);
                (eig.max(), lift(basis, &y))
            }
            Face::Sampled(parts) => parts
                .iter()
                .map(|f| f.argmax_re(b, p))
                .fold(None, |best: Option<(f64, Vec<C64>)>, cand| match best {
                    Some(bst) if bst.0 >= cand.0 => Some(bst),
                    _ => Some(cand),
                })
                .expect("sampled face is nonempty"),
        }
    }

    pub fn argmin_re(&self, b: &Matrix, p: C64) -> (f64, Vec<C64>) {
        let (v, x) = self.argmax_re(b, -p);
        (-v, x)
    }
}

fn combine(u: &[C64], e: C64, w: &[C64]) -> Vec<C64> {
    u.iter().zip(w).map(|(&a, &b)| a + e * b).collect()
}

/// `sum_i y_i basis_i`.
fn lift(basis: &[Vec<C64>], y: &[C64]) -> Vec<C64> {
    let n = basis[0].len();
    let mut x = vec![C64::new(0.0, 0.0); n];
    for (b, &c) in basis.iter().zip(y) {
        for (xi, &bi) in x.iter_mut().zip(b) {
            *xi += c * bi;
        }
    }
    x
}

/// Maximizing states at one phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRecord {
    pub theta: f64,
    pub face: Face,
    pub witnesses: Vec<State>,
}

/// All states with `|φ(a)| = v(a)`, organized by phase.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximizingFamily {
    pub element: Matrix,
    pub radius: f64,
    pub records: Vec<PhaseRecord>,
    /// True when every face was described exactly and the phase set is finite.
    pub exhaustive: bool,
    /// The support function is maximal on a whole arc; records sample it.
    pub flat: bool,
}

impl MaximizingFamily {
    /// Face at an arbitrary phase of a flat arc.
    pub fn face_at(&self, theta: f64) -> Result<Face> {
        face_at(&self.element, theta)
    }
}

pub fn maximizing_states(a: &Matrix) -> Result<MaximizingFamily> {
    maximizing_states_with(a, &Settings::DEFAULT)
}

pub fn maximizing_states_with(a: &Matrix, settings: &Settings) -> Result<MaximizingFamily> {
    let dirs = maximizing_directions(a, settings)?;
    let records = dirs
        .thetas
        .iter()
        .map(|&theta| {
            let face = face_at(a, theta)?;
            let witnesses = face
                .representatives()
                .iter()
                .map(|x| pure_state(x))
                .collect::<Result<Vec<_>>>()?;
            Ok(PhaseRecord { theta, face, witnesses })
        })
        .collect::<Result<Vec<_>>>()?;
    let exhaustive = !dirs.flat
        && records
            .iter()
            .all(|r| matches!(r.face, Face::Point(_) | Face::Circle { .. }));
    Ok(MaximizingFamily {
        element: a.clone(),
        radius: dirs.value,
        records,
        exhaustive,
        flat: dirs.flat,
    })
}

/// Unit vectors of the top eigenspace `E` of `Re(e^{iθ} a)` on which
/// `Im(e^{iθ} ⟨a x, x⟩)` vanishes.
fn face_at(a: &Matrix, theta: f64) -> Result<Face> {
    let eig = hermitian_eig(&rotated_real_part(a, theta))?;
    let scale = eig.values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
    let tol = EIGENSPACE_TOL * scale;
    let k = eig.top_cluster(tol);
    let basis: Vec<Vec<C64>> = (0..k).map(|i| eig.vector(i)).collect();
    if k == 1 {
        return Ok(Face::Point(basis[0].clone()));
    }
    let h = compress(&rotated_imag_part(a, theta), &basis)?.hermitian_part();
    if h.max_abs() <= tol {
        return Ok(Face::Subspace(basis));
    }
    if k == 2 {
        return Ok(lift_face(&basis, zero_set_2d(&h, tol)?));
    }
    sampled_face(&basis, &h, tol)
}

/// Zero set of `y ↦ ⟨h y, y⟩` on the unit sphere of C², `h` Hermitian.
fn zero_set_2d(h: &Matrix, tol: f64) -> Result<Face> {
    let eig = hermitian_eig(h)?;
    let (mu1, mu2) = (eig.values[0], eig.values[1]);
    let (y1, y2) = (eig.vector(0), eig.vector(1));
    if mu2 >= -tol {
        return Ok(Face::Point(y2));
    }
    if mu1 <= tol {
        return Ok(Face::Point(y1));
    }
    let alpha = (-mu2 / (mu1 - mu2)).sqrt();
    let beta = (mu1 / (mu1 - mu2)).sqrt();
    Ok(Face::Circle {
        u: y1.iter().map(|z| z * alpha).collect(),
        w: y2.iter().map(|z| z * beta).collect(),
    })
}

fn lift_face(basis: &[Vec<C64>], face: Face) -> Face {
    match face {
        Face::Point(y) => Face::Point(lift(basis, &y)),
        Face::Circle { u, w } => Face::Circle {
            u: lift(basis, &u),
            w: lift(basis, &w),
        },
        other => other,
    }
}

/// Deterministic sample of the zero set in dimension `k ≥ 3`: every random
/// direction `y` is paired with the extreme eigenvector of opposite sign and
/// the zero circle of that two-dimensional slice is kept.
fn sampled_face(basis: &[Vec<C64>], h: &Matrix, tol: f64) -> Result<Face> {
    let k = basis.len();
    let eig = hermitian_eig(h)?;
    let top = eig.vector(0);
    let bottom = eig.vector(k - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(SPHERE_SEED);
    let mut parts = Vec::with_capacity(SPHERE_SAMPLES);
    for _ in 0..SPHERE_SAMPLES {
        let y = gaussian_vector(k, &mut rng);
        let norm = vector_norm(&y);
        let y: Vec<C64> = y.iter().map(|z| z / norm).collect();
        let value = h.quadratic_form(&y).re;
        let partner = if value > 0.0 { &bottom } else { &top };
        let overlap = dot(partner, &y);
        let mut z: Vec<C64> = partner.iter().zip(&y).map(|(&p, &q)| p - overlap * q).collect();
        let zn = vector_norm(&z);
        if zn < 1e-8 {
            continue;
        }
        z.iter_mut().for_each(|c| *c /= zn);
        let slice = [y, z];
        let h2 = compress(h, &slice)?.hermitian_part();
        if let Ok(face) = zero_set_2d(&h2, tol) {
            parts.push(lift_face(basis, lift_face(&slice, face)));
        }
    }
    if parts.is_empty() {
        return Ok(Face::Subspace(basis.to_vec()));
    }
    Ok(Face::Sampled(parts))
}
