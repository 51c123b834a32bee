//! Eigenstructure of the system matrix: clustered eigenvalues, the real
//! modal basis and its row/column partitions, Khatri-Rao products, kernels
//! and inertia.

use nalgebra::{DVector, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat};
use crate::statespace::SystemMatrix;

/// Default relative gap for merging eigenvalues into one group.
pub const EIG_TOL: f64 = 1e-7;
/// Default relative tolerance for kernels and ranks.
pub const KERNEL_TOL: f64 = 1e-10;
/// Default relative tolerance for inertia counts.
pub const INERTIA_TOL: f64 = 1e-10;

/// Modal bases with a condition number above this are treated as defective.
const MAX_MODAL_COND: f64 = 1e7;

/// One distinct real eigenvalue, or one complex-conjugate pair represented
/// by its upper-half-plane member.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigGroup {
    pub value: Complex64,
    /// Algebraic multiplicity of `value`.
    pub multiplicity: usize,
}

impl EigGroup {
    pub fn is_real(&self) -> bool {
        self.value.im == 0.0
    }

    /// Number of modal columns: `mul` for real, `2 mul` for complex.
    pub fn size(&self) -> usize {
        if self.is_real() {
            self.multiplicity
        } else {
            2 * self.multiplicity
        }
    }

    /// The real block this group occupies in `V^-1 P V`.
    pub fn ideal_block(&self) -> Mat {
        let t = self.size();
        if self.is_real() {
            return Mat::identity(t, t) * self.value.re;
        }
        let (a, b) = (self.value.re, self.value.im);
        let mut blk = Mat::zeros(t, t);
        for k in 0..self.multiplicity {
            let o = 2 * k;
            blk[(o, o)] = a;
            blk[(o, o + 1)] = b;
            blk[(o + 1, o)] = -b;
            blk[(o + 1, o + 1)] = a;
        }
        blk
    }
}

/// Real modal decomposition `P V = V J` with `J` block diagonal by group.
#[derive(Debug, Clone)]
pub struct EigStructure {
    pub groups: Vec<EigGroup>,
    /// Real modal basis; columns grouped per `groups`, complex pairs as
    /// interleaved `(Re v, Im v)` columns.
    pub v: Mat,
    /// Number of leading rows forming `W` (the state dimension).
    pub n: usize,
    /// First column of each group in `v`.
    pub col_offsets: Vec<usize>,
}

impl EigStructure {
    /// Group sizes `t_j`.
    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(EigGroup::size).collect()
    }

    /// Top `n` rows of `V`.
    pub fn w(&self) -> Mat {
        self.v.rows(0, self.n).into_owned()
    }

    /// Bottom `m` rows of `V`.
    pub fn z(&self) -> Mat {
        self.v.rows(self.n, self.v.nrows() - self.n).into_owned()
    }

    /// Whether every eigenvalue is real and simple.
    pub fn is_distinct_real(&self) -> bool {
        self.groups.iter().all(|g| g.is_real() && g.multiplicity == 1)
    }

    /// `blockdiag(J_1, ..., J_r)`.
    pub fn ideal_jordan(&self) -> Mat {
        let blocks: Vec<Mat> = self.groups.iter().map(EigGroup::ideal_block).collect();
        linalg::block_diag(&blocks)
    }

    /// `max |V^-1 P V - J|`, for diagnostics.
    pub fn block_residual(&self, p: &Mat) -> f64 {
        let vi = linalg::inverse(&self.v).expect("modal basis is nonsingular");
        linalg::max_abs(&(vi * p * &self.v - self.ideal_jordan()))
    }

    /// Khatri-Rao product `Z * W` under this structure's column partition.
    pub fn khatri_rao(&self) -> Mat {
        khatri_rao(&self.z(), &self.w(), &self.sizes()).expect("partition matches by construction")
    }
}

fn cluster(values: &mut [Complex64], gap: f64) -> Vec<Vec<Complex64>> {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for &v in values.iter() {
        match clusters.iter_mut().find(|c| c.iter().any(|u| (u - v).norm() <= gap)) {
            Some(c) => c.push(v),
            None => clusters.push(vec![v]),
        }
    }
    clusters
}

fn normalize_real(mut v: DVector<f64>) -> DVector<f64> {
    v /= v.norm();
    if let Some(first) = v.iter().copied().find(|x| x.abs() > 1e-8) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
    v
}

fn normalize_complex(v: nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
    let pivot = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap_or(Complex64::new(1.0, 0.0));
    let rot = pivot.conj() / pivot.norm();
    let v = v * rot;
    let norm = v.norm();
    v / Complex64::new(norm, 0.0)
}

/// Null vectors of `M` (square) belonging to its `k` smallest singular
/// values, plus the largest of those singular values.
fn smallest_right_vectors_real(m: &Mat, k: usize) -> (Vec<DVector<f64>>, f64) {
    let svd = linalg::full_svd(m);
    let q = m.ncols();
    let vecs = (q - k..q).map(|c| svd.v.column(c).into_owned()).collect();
    (vecs, svd.singular_values[q - k])
}

fn smallest_right_vectors_complex(m: &CMat, k: usize) -> (Vec<nalgebra::DVector<Complex64>>, f64) {
    let svd = SVD::new(m.clone(), false, true);
    let vt = svd.v_t.expect("v_t requested");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let q = order.len();
    let vecs = order[q - k..]
        .iter()
        .map(|&r| vt.row(r).transpose().map(|c| c.conj()))
        .collect();
    (vecs, svd.singular_values[order[q - k]])
}

/// Computes groups, the real modal basis and partitions of `P`.
///
/// Fails with [`Error::Defective`] when an eigenvalue group lacks a full
/// set of eigenvectors.
pub fn eig_structure(p: &SystemMatrix, tol: f64) -> Result<EigStructure> {
    eig_structure_of(&p.p, p.n, tol)
}

pub fn eig_structure_of(p: &Mat, n: usize, tol: f64) -> Result<EigStructure> {
    let q = p.nrows();
    let eigs: Vec<Complex64> = nalgebra::Schur::new(p.clone()).complex_eigenvalues().iter().copied().collect();
    let rho = eigs.iter().map(|l| l.norm()).fold(0.0_f64, f64::max);
    let gap = if rho > 0.0 { tol * rho } else { tol };

    let mut reals = Vec::new();
    let mut uppers = Vec::new();
    let mut lowers = 0usize;
    for l in eigs {
        if l.im.abs() <= gap {
            reals.push(Complex64::new(l.re, 0.0));
        } else if l.im > 0.0 {
            uppers.push(l);
        } else {
            lowers += 1;
        }
    }
    if lowers != uppers.len() {
        return Err(Error::WrongStructure("unpaired complex eigenvalues".into()));
    }

    let mut groups: Vec<(EigGroup, Complex64)> = Vec::new();
    for c in cluster(&mut reals, gap).into_iter().chain(cluster(&mut uppers, gap)) {
        let mean = c.iter().sum::<Complex64>() / c.len() as f64;
        let mean = if c[0].im == 0.0 { Complex64::new(mean.re, 0.0) } else { mean };
        groups.push((
            EigGroup {
                value: mean,
                multiplicity: c.len(),
            },
            mean,
        ));
    }
    groups.sort_by(|a, b| a.1.re.total_cmp(&b.1.re).then(a.1.im.total_cmp(&b.1.im)));

    let scale = linalg::singular_values(p).first().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let defect_cut = tol.sqrt() * scale;
    let mut columns: Vec<DVector<f64>> = Vec::with_capacity(q);
    let mut col_offsets = Vec::with_capacity(groups.len());
    for (g, lam) in &groups {
        col_offsets.push(columns.len());
        let k = g.multiplicity;
        if g.is_real() {
            let shifted = p - Mat::identity(q, q) * lam.re;
            let (vecs, worst) = smallest_right_vectors_real(&shifted, k);
            if worst > defect_cut {
                return Err(Error::Defective { eigenvalue: lam.re });
            }
            columns.extend(vecs.into_iter().map(normalize_real));
        } else {
            let shifted = linalg::to_complex(p) - CMat::identity(q, q) * *lam;
            let (vecs, worst) = smallest_right_vectors_complex(&shifted, k);
            if worst > defect_cut {
                return Err(Error::Defective { eigenvalue: lam.re });
            }
            for v in vecs.into_iter().map(normalize_complex) {
                columns.push(v.map(|c| c.re));
                columns.push(v.map(|c| c.im));
            }
        }
    }
    let v = Mat::from_columns(&columns);
    let (lo, hi) = linalg::sv_extremes(&v);
    if lo * MAX_MODAL_COND < hi {
        let lam = groups.first().map(|g| g.1.re).unwrap_or(0.0);
        return Err(Error::Defective { eigenvalue: lam });
    }
    Ok(EigStructure {
        groups: groups.into_iter().map(|g| g.0).collect(),
        v,
        n,
        col_offsets,
    })
}

/// Column-wise block Kronecker product `[Z_1 (x) W_1, ..., Z_r (x) W_r]`.
pub fn khatri_rao(z: &Mat, w: &Mat, t: &[usize]) -> Result<Mat> {
    let total: usize = t.iter().sum();
    if z.ncols() != total || w.ncols() != total {
        return Err(Error::Dimension(format!(
            "partition sums to {total} but Z has {} and W has {} columns",
            z.ncols(),
            w.ncols()
        )));
    }
    let cols: usize = t.iter().map(|x| x * x).sum();
    let mut out = Mat::zeros(z.nrows() * w.nrows(), cols);
    let (mut src, mut dst) = (0, 0);
    for &tj in t {
        let blk = z.columns(src, tj).kronecker(&w.columns(src, tj));
        out.view_mut((0, dst), blk.shape()).copy_from(&blk);
        src += tj;
        dst += tj * tj;
    }
    Ok(out)
}

/// Orthonormal basis of the numerical kernel of `m`.
///
/// Singular values at most `tol * s_max * max(dims)` count as zero. Each
/// basis vector is sign-normalized so its largest-magnitude entry is
/// positive.
pub fn kernel(m: &Mat, tol: f64) -> Mat {
    let cols = m.ncols();
    if cols == 0 {
        return Mat::zeros(0, 0);
    }
    if m.nrows() == 0 {
        return Mat::identity(cols, cols);
    }
    let r = linalg::rank(m, tol);
    let svd = linalg::full_svd(m);
    let mut basis = svd.v.columns(r, cols - r).into_owned();
    for mut col in basis.column_iter_mut() {
        let pivot = col
            .iter()
            .copied()
            .max_by(|a, b| a.abs().total_cmp(&b.abs()))
            .unwrap_or(0.0);
        if pivot < 0.0 {
            col.neg_mut();
        }
    }
    basis
}

/// Eigenvalue sign counts of a symmetric matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub n_plus: usize,
    pub n_minus: usize,
    pub n_zero: usize,
}

impl Inertia {
    /// `n_+ - n_-`.
    pub fn signature(&self) -> i64 {
        self.n_plus as i64 - self.n_minus as i64
    }

    pub fn dim(&self) -> usize {
        self.n_plus + self.n_minus + self.n_zero
    }
}

pub fn inertia(s: &Mat, tol: f64) -> Result<Inertia> {
    if !s.is_square() {
        return Err(Error::Dimension("inertia needs a square matrix".into()));
    }
    let scale = linalg::max_abs(s);
    if linalg::max_abs(&(s - s.transpose())) > tol * scale {
        return Err(Error::NotSymmetricMatrix);
    }
    let (vals, _) = linalg::sym_eig_desc(s);
    let rho = vals.iter().map(|v| v.abs()).fold(0.0_f64, f64::max);
    let cut = tol * rho;
    let mut out = Inertia {
        n_plus: 0,
        n_minus: 0,
        n_zero: 0,
    };
    for &v in vals.iter() {
        if rho > 0.0 && v > cut {
            out.n_plus += 1;
        } else if rho > 0.0 && v < -cut {
            out.n_minus += 1;
        } else {
            out.n_zero += 1;
        }
    }
    Ok(out)
}
