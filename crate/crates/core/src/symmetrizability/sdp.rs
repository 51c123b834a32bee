//! Small dense semidefinite feasibility solver.
//!
//! Solves `max t  s.t.  sum_k c_k Q_k - t I >= 0, |c_k| <= 1` by a primal
//! log-barrier path-following method. Problems here have a handful of
//! variables and matrices of order at most a few dozen, so dense Newton
//! steps are cheap.

use nalgebra::{Cholesky, DVector, Dyn};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};

const OUTER_GROWTH: f64 = 10.0;
const GAP_TOL: f64 = 1e-9;
const NEWTON_TOL: f64 = 1e-10;
const MAX_NEWTON: usize = 60;
const MAX_OUTER: usize = 30;

#[derive(Debug, Clone)]
pub struct SdpOutcome {
    pub coeffs: DVector<f64>,
    /// Optimal `t`, i.e. the smallest eigenvalue of `sum c_k Q_k`.
    pub margin: f64,
}

struct State<'a> {
    basis: &'a [Mat],
    q: usize,
}

impl State<'_> {
    fn slack(&self, y: &DVector<f64>) -> Mat {
        let k = self.basis.len();
        let mut f = Mat::identity(self.q, self.q) * -y[k];
        for (ck, qk) in y.iter().zip(self.basis) {
            f += qk * *ck;
        }
        f
    }

    /// Barrier objective, or `None` outside the domain.
    fn value(&self, y: &DVector<f64>, tau: f64) -> Option<f64> {
        let k = self.basis.len();
        if y.rows(0, k).iter().any(|c| c.abs() >= 1.0) {
            return None;
        }
        let chol = Cholesky::new(self.slack(y))?;
        let logdet: f64 = chol.l_dirty().diagonal().iter().map(|d| 2.0 * d.ln()).sum();
        let boxes: f64 = y.rows(0, k).iter().map(|c| (1.0 - c * c).ln()).sum();
        Some(-tau * y[k] - logdet - boxes)
    }

    fn newton_step(&self, y: &DVector<f64>, tau: f64) -> Option<(DVector<f64>, DVector<f64>)> {
        let k = self.basis.len();
        let g_inv = Cholesky::new(self.slack(y))?.inverse();
        let gq: Vec<Mat> = self.basis.iter().map(|qk| &g_inv * qk).collect();
        let mut grad = DVector::zeros(k + 1);
        let mut hess = Mat::zeros(k + 1, k + 1);
        for i in 0..k {
            let c = y[i];
            let d = 1.0 - c * c;
            grad[i] = -gq[i].trace() + 2.0 * c / d;
            for j in 0..=i {
                let h = (&gq[i] * &gq[j]).trace();
                hess[(i, j)] = h;
                hess[(j, i)] = h;
            }
            hess[(i, i)] += 2.0 * (1.0 + c * c) / (d * d);
            let cross = -(&gq[i] * &g_inv).trace();
            hess[(i, k)] = cross;
            hess[(k, i)] = cross;
        }
        grad[k] = -tau + g_inv.trace();
        hess[(k, k)] = (&g_inv * &g_inv).trace();
        let step = Cholesky::<f64, Dyn>::new(hess)?.solve(&(-&grad));
        Some((step, grad))
    }
}

/// Maximizes the smallest eigenvalue of `sum c_k Q_k` over `|c|_inf <= 1`.
///
/// `basis` should be Frobenius-orthonormal so the returned margin is on a
/// fixed scale.
pub fn max_min_eigenvalue(basis: &[Mat]) -> Result<SdpOutcome> {
    let k = basis.len();
    let Some(first) = basis.first() else {
        return Err(Error::SolverFailure("empty basis".into()));
    };
    let q = first.nrows();
    let st = State { basis, q };
    let mut y = DVector::zeros(k + 1);
    y[k] = -1.0;
    let nu = (q + 2 * k) as f64;
    let mut tau = 1.0;
    for _ in 0..MAX_OUTER {
        for _ in 0..MAX_NEWTON {
            let (step, grad) = st
                .newton_step(&y, tau)
                .ok_or_else(|| Error::SolverFailure("singular Newton system".into()))?;
            let decrement = -grad.dot(&step);
            if decrement / 2.0 < NEWTON_TOL {
                break;
            }
            let f0 = st.value(&y, tau).expect("iterate stays interior");
            let mut s = 1.0;
            loop {
                let trial = &y + &step * s;
                if let Some(f1) = st.value(&trial, tau) {
                    if f1 <= f0 - 0.25 * s * decrement {
                        y = trial;
                        break;
                    }
                }
                s *= 0.5;
                if s < 1e-14 {
                    break;
                }
            }
            if s < 1e-14 {
                break;
            }
        }
        if nu / tau < GAP_TOL {
            break;
        }
        tau *= OUTER_GROWTH;
    }
    let coeffs = y.rows(0, k).into_owned();
    let mut combo = Mat::zeros(q, q);
    for (c, qk) in coeffs.iter().zip(basis) {
        combo += qk * *c;
    }
    let margin = linalg::sym_eig(&combo).eigenvalues.min();
    Ok(SdpOutcome { coeffs, margin })
}
