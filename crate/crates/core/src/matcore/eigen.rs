use super::{fix_phase, Matrix, C64};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;
const HERMITIAN_TOL: f64 = 1e-12;

/// Spectral decomposition of a Hermitian matrix.
///
/// Eigenvalues are sorted descending; column `i` of `vectors` is the unit
/// eigenvector paired with `values[i]`, phase-normalized so its
/// largest-magnitude entry is real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl HermitianEigen {
    pub fn vector(&self, i: usize) -> Vec<C64> {
        self.vectors.column(i)
    }

    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("nonempty spectrum")
    }

    /// Indices of eigenvalues within `tol` of the largest one.
    pub fn top_cluster(&self, tol: f64) -> usize {
        let top = self.values[0];
        self.values.iter().take_while(|&&v| v >= top - tol).count()
    }
}

/// Diagonalizes a Hermitian matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eig(h: &Matrix) -> Result<HermitianEigen> {
    let n = h.dim();
    let scale = h.max_abs();
    let mut asymmetry: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            asymmetry = asymmetry.max((h.get(i, j) - h.get(j, i).conj()).norm());
        }
    }
    if asymmetry > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            asymmetry: asymmetry / scale,
        });
    }

    let mut work = h.hermitian_part();
    let mut vectors = Matrix::identity(n);
    jacobi(&mut work.data, n, Some(&mut vectors.data));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&p, &q| work.get(q, q).re.total_cmp(&work.get(p, p).re));

    let values: Vec<f64> = order.iter().map(|&k| work.get(k, k).re).collect();
    let columns: Vec<Vec<C64>> = order
        .iter()
        .map(|&k| {
            let mut col = vectors.column(k);
            fix_phase(&mut col);
            col
        })
        .collect();
    Ok(HermitianEigen {
        values,
        vectors: Matrix::from_columns(&columns)?,
    })
}

/// Largest eigenvalue of a Hermitian matrix given as a row-major buffer.
///
/// The buffer is overwritten. Dimensions 1 and 2 use closed forms; larger
/// ones run the Jacobi iteration without accumulating eigenvectors.
pub fn lambda_max_in_place(h: &mut [C64], n: usize) -> f64 {
    match n {
        1 => h[0].re,
        2 => {
            let a = h[0].re;
            let d = h[3].re;
            0.5 * (a + d) + (0.5 * (a - d)).hypot(h[1].norm())
        }
        3 => match lambda_max_3(h) {
            Some(top) => top,
            None => {
                jacobi(h, n, None);
                (0..n).map(|i| h[i * n + i].re).fold(f64::NEG_INFINITY, f64::max)
            }
        },
        _ => {
            jacobi(h, n, None);
            (0..n).map(|i| h[i * n + i].re).fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// Trigonometric solution of the characteristic cubic. Returns `None` when
/// the two largest eigenvalues nearly coincide, where the cubic is
/// ill-conditioned.
fn lambda_max_3(h: &[C64]) -> Option<f64> {
    let (b, c, e) = (h[1], h[2], h[5]);
    let q = (h[0].re + h[4].re + h[8].re) / 3.0;
    let (x, y, z) = (h[0].re - q, h[4].re - q, h[8].re - q);
    let (bb, cc, ee) = (b.norm_sqr(), c.norm_sqr(), e.norm_sqr());
    let p = ((x * x + y * y + z * z + 2.0 * (bb + cc + ee)) / 6.0).sqrt();
    if p == 0.0 {
        return Some(q);
    }
    let det = x * y * z + 2.0 * (b * e * c.conj()).re - x * ee - y * cc - z * bb;
    let r = (det / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    if r < -1.0 + 1e-6 {
        return None;
    }
    Some(q + 2.0 * p * (r.acos() / 3.0).cos())
}

/// In-place cyclic Jacobi. On return the diagonal of `h` holds the
/// eigenvalues and, if given, `v` has been right-multiplied by the
/// accumulated unitary.
fn jacobi(h: &mut [C64], n: usize, mut v: Option<&mut [C64]>) {
    let fro = h.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if fro == 0.0 {
        return;
    }
    let threshold = OFF_DIAGONAL_TOL * fro;
    for i in 0..n {
        h[i * n + i].im = 0.0;
    }

    for _ in 0..MAX_SWEEPS {
        let mut off: f64 = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(h[p * n + q].norm());
            }
        }
        if off <= threshold {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let hpq = h[p * n + q];
                let mag = hpq.norm();
                if mag == 0.0 {
                    continue;
                }
                let app = h[p * n + p].re;
                let aqq = h[q * n + q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau == 0.0 {
                    1.0
                } else {
                    tau.signum() / (tau.abs() + tau.hypot(1.0))
                };
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                let phase = hpq / mag;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane
                let g_pp = C64::new(c, 0.0);
                let g_pq = C64::new(s, 0.0);
                let g_qp = phase.conj() * -s;
                let g_qq = phase.conj() * c;

                for k in 0..n {
                    let hkp = h[k * n + p];
                    let hkq = h[k * n + q];
                    h[k * n + p] = hkp * g_pp + hkq * g_qp;
                    h[k * n + q] = hkp * g_pq + hkq * g_qq;
                }
                for k in 0..n {
                    let hpk = h[p * n + k];
                    let hqk = h[q * n + k];
                    h[p * n + k] = g_pp.conj() * hpk + g_qp.conj() * hqk;
                    h[q * n + k] = g_pq.conj() * hpk + g_qq.conj() * hqk;
                }
                h[p * n + q] = C64::new(0.0, 0.0);
                h[q * n + p] = C64::new(0.0, 0.0);
                h[p * n + p] = C64::new(app - t * mag, 0.0);
                h[q * n + q] = C64::new(aqq + t * mag, 0.0);

                if let Some(v) = v.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * g_pp + vkq * g_qp;
                        v[k * n + q] = vkp * g_pq + vkq * g_qq;
                    }
                }
            }
        }
    }
}
