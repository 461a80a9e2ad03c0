use super::{lambda_max_in_place, Matrix, C64};

/// Real linear combinations `sum w_k H_k` of fixed Hermitian matrices, with a
/// reusable scratch buffer for repeated largest-eigenvalue queries.
#[derive(Debug, Clone)]
pub(crate) struct HermitianCombo {
    n: usize,
    terms: Vec<Matrix>,
    buf: Vec<C64>,
}

impl HermitianCombo {
    pub fn new(terms: Vec<Matrix>) -> Self {
        let n = terms[0].dim();
        debug_assert!(terms.iter().all(|t| t.dim() == n));
        HermitianCombo {
            n,
            terms,
            buf: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    /// The pair `(A, B)` with `Re(e^{iθ} a) = cos θ A - sin θ B`.
    pub fn support(a: &Matrix) -> Self {
        HermitianCombo::new(vec![a.hermitian_part(), a.skew_part()])
    }

    pub fn terms(&self) -> &[Matrix] {
        &self.terms
    }

    pub fn matrix(&self, weights: &[f64]) -> Matrix {
        let mut data = vec![C64::new(0.0, 0.0); self.n * self.n];
        self.fill(weights, &mut data);
        Matrix::new(self.n, data).expect("combination of valid matrices")
    }

    pub fn lambda_max(&mut self, weights: &[f64]) -> f64 {
        let mut buf = std::mem::take(&mut self.buf);
        self.fill(weights, &mut buf);
        let value = lambda_max_in_place(&mut buf, self.n);
        self.buf = buf;
        value
    }

    fn fill(&self, weights: &[f64], out: &mut [C64]) {
        debug_assert_eq!(weights.len(), self.terms.len());
        out.iter_mut().for_each(|z| *z = C64::new(0.0, 0.0));
        for (w, t) in weights.iter().zip(&self.terms) {
            if *w == 0.0 {
                continue;
            }
            for (o, &x) in out.iter_mut().zip(t.as_slice()) {
                *o += x * *w;
            }
        }
    }
}

/// Rotation weights selecting `Re(e^{iθ} a)` from [`HermitianCombo::support`].
#[inline]
pub(crate) fn rotation(theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    [c, -s]
}
