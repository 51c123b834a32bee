//! Dense linear-algebra helpers shared by the analysis modules.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};
use num_complex::Complex64;

pub type Mat = DMatrix<f64>;
pub type CMat = DMatrix<Complex64>;

/// Largest absolute entry.
pub fn max_abs(m: &Mat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn cmax_abs(m: &CMat) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.norm()))
}

/// Full SVD with singular values sorted descending.
///
/// Wide matrices are padded with zero rows first so that the returned
/// right factor is square and spans the whole domain, which is what
/// kernel computations need.
pub struct FullSvd {
    pub singular_values: Vec<f64>,
    /// Columns are right singular vectors, ordered like `singular_values`
    /// and then completed with the null directions of a wide input.
    pub v: Mat,
    pub u: Mat,
}

pub fn full_svd(m: &Mat) -> FullSvd {
    let (rows, cols) = m.shape();
    let padded = if rows < cols {
        let mut p = Mat::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, true, true);
    let u = svd.u.expect("u requested");
    let vt = svd.v_t.expect("v_t requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let singular_values: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();
    let v = Mat::from_fn(cols, k, |r, c| vt[(order[c], r)]);
    let u = Mat::from_fn(u.nrows(), k, |r, c| u[(r, order[c])]);
    FullSvd {
        singular_values: singular_values.into_iter().take(rows.min(cols)).collect(),
        v,
        u,
    }
}

pub fn singular_values(m: &Mat) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank: count of singular values above `tol * s_max * max(dims)`.
pub fn rank(m: &Mat, tol: f64) -> usize {
    let s = singular_values(m);
    let Some(&smax) = s.first() else { return 0 };
    if smax == 0.0 {
        return 0;
    }
    let cut = tol * smax * m.nrows().max(m.ncols()) as f64;
    s.iter().filter(|&&v| v > cut).count()
}

/// Smallest and largest singular values of a square matrix.
pub fn sv_extremes(m: &Mat) -> (f64, f64) {
    let s = singular_values(m);
    (*s.last().unwrap_or(&0.0), *s.first().unwrap_or(&0.0))
}

/// True when the smallest singular value is at most `rel * s_max`.
pub fn is_singular(m: &Mat, rel: f64) -> bool {
    let (lo, hi) = sv_extremes(m);
    hi == 0.0 || lo <= rel * hi
}

/// Symmetric eigendecomposition of `(S + S^T) / 2`, unsorted.
///
/// nalgebra's implicit QR occasionally stops with a reconstruction error
/// far above machine precision, so its result is polished with cyclic
/// Jacobi sweeps on `V^T S V` until the off-diagonal part is at rounding
/// level.
pub fn sym_eig(s: &Mat) -> SymmetricEigen<f64, nalgebra::Dyn> {
    const MAX_SWEEPS: usize = 50;
    let sym = symmetrize_part(s);
    let n = sym.nrows();
    let start = SymmetricEigen::new(sym.clone());
    let mut v = start.eigenvectors;
    let mut a = v.transpose() * &sym * &v;
    let floor = f64::EPSILON * a.norm();
    for _ in 0..MAX_SWEEPS {
        let off = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum::<f64>().sqrt();
        if off <= floor {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - sn * akq;
                    a[(k, q)] = sn * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - sn * aqk;
                    a[(q, k)] = sn * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - sn * vkq;
                    v[(k, q)] = sn * vkp + c * vkq;
                }
            }
        }
    }
    SymmetricEigen {
        eigenvalues: a.diagonal(),
        eigenvectors: v,
    }
}

/// Symmetric eigendecomposition with eigenvalues sorted descending.
///
/// Each eigenvector is sign-normalized so that its largest-magnitude entry
/// is positive.
pub fn sym_eig_desc(s: &Mat) -> (DVector<f64>, Mat) {
    let eig = sym_eig(s);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let vals = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vecs = Mat::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    for mut col in vecs.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
    (vals, vecs)
}

/// (S + S^T) / 2.
pub fn symmetrize_part(s: &Mat) -> Mat {
    (s + s.transpose()) * 0.5
}

/// Principal square root of a symmetric positive definite matrix.
pub fn spd_sqrt(s: &Mat) -> Option<Mat> {
    let (vals, vecs) = sym_eig_desc(s);
    if vals.iter().any(|&v| v <= 0.0) {
        return None;
    }
    let d = Mat::from_diagonal(&vals.map(f64::sqrt));
    Some(&vecs * d * vecs.transpose())
}

pub fn inverse(m: &Mat) -> Option<Mat> {
    m.clone().try_inverse()
}

pub fn to_complex(m: &Mat) -> CMat {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Largest principal angle (radians) between the column spaces of two
/// matrices with orthonormal columns.
pub fn max_principal_angle(u1: &Mat, u2: &Mat) -> f64 {
    if u1.ncols() != u2.ncols() {
        return std::f64::consts::FRAC_PI_2;
    }
    if u1.ncols() == 0 {
        return 0.0;
    }
    let residual = u2 - u1 * (u1.transpose() * u2);
    let s = singular_values(&residual);
    s.first().copied().unwrap_or(0.0).clamp(0.0, 1.0).asin()
}

/// Orthonormal basis of the column space (thin QR via SVD, rank by `tol`).
pub fn orth(m: &Mat, tol: f64) -> Mat {
    let r = rank(m, tol);
    let svd = full_svd(m);
    svd.u.columns(0, r).into_owned()
}

/// Block diagonal matrix from square or rectangular blocks.
pub fn block_diag(blocks: &[Mat]) -> Mat {
    let rows: usize = blocks.iter().map(|b| b.nrows()).sum();
    let cols: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = Mat::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for b in blocks {
        out.view_mut((r, c), b.shape()).copy_from(b);
        r += b.nrows();
        c += b.ncols();
    }
    out
}

/// Column-major vectorization.
pub fn vec_of(m: &Mat) -> DVector<f64> {
    DVector::from_column_slice(m.as_slice())
}
