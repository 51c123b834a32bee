//! Sign-pattern feasibility over a kernel basis.

use minilp::{ComparisonOp, OptimizationDirection, Problem};
use nalgebra::DVector;

use crate::linalg::Mat;

/// A pattern counts as feasible only if the best point clears this margin.
///
/// The simplex code works with an internal tolerance of 1e-8, so anything
/// below that is indistinguishable from a structural zero.
pub const LP_MARGIN: f64 = 1e-7;

/// Largest `t` with `e_j (N c)_j >= t` for all `j` and `|c|_inf <= 1`.
///
/// Returns `(x, t)` where `x = N c` is re-evaluated in double precision,
/// so `t` is the margin actually achieved rather than the solver's claim.
pub fn max_margin(basis: &Mat, pattern: &[i8]) -> Option<(DVector<f64>, f64)> {
    let k = basis.ncols();
    if k == 0 || basis.nrows() != pattern.len() {
        return None;
    }
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let c: Vec<_> = (0..k).map(|_| lp.add_var(0.0, (-1.0, 1.0))).collect();
    let t = lp.add_var(1.0, (f64::NEG_INFINITY, 1.0));
    for (j, &e) in pattern.iter().enumerate() {
        let e = f64::from(e);
        let mut terms: Vec<_> = (0..k).map(|i| (c[i], e * basis[(j, i)])).collect();
        terms.push((t, -1.0));
        lp.add_constraint(terms, ComparisonOp::Ge, 0.0);
    }
    let sol = lp.solve().ok()?;
    let coeffs = DVector::from_iterator(k, c.iter().map(|&v| sol[v]));
    let x = basis * coeffs;
    let margin = pattern
        .iter()
        .zip(x.iter())
        .map(|(&e, &v)| f64::from(e) * v)
        .fold(f64::INFINITY, f64::min);
    Some((x, margin))
}

/// `Some(x)` with `e_j x_j > 0` for all `j` if such `x` exists in the span.
pub fn feasible_point(basis: &Mat, pattern: &[i8]) -> Option<DVector<f64>> {
    max_margin(basis, pattern).filter(|(_, t)| *t > LP_MARGIN).map(|(x, _)| x)
}
