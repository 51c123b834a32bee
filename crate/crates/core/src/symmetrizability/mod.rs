//! Symmetrizability: certificates `Q`, the rank-based necessary test, exact
//! decisions for distinct real spectra, signature enumeration, complete
//! symmetrizability and gain synthesis.
//!
//! A certificate is a nonsingular symmetric `Q` with `P Q = Q P^T` and a
//! zero off-diagonal block `Q12`. Its diagonal blocks factor as
//! `Q11 = -T Sigma_i T^T` and `Q22 = K Sigma_e K^T`, and the input-output
//! transformation by `(K, T)` makes the system internally symmetric.

mod lp;
mod sdp;

use std::collections::BTreeSet;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

pub use lp::LP_MARGIN;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::par;
use crate::spectral::{self, EigGroup, EigStructure, EIG_TOL, KERNEL_TOL};
use crate::statespace::{apply_io_transform, mat_from_rows, rows_of, system_matrix, StateSpace, SystemMatrix};
use crate::symmetry::{SignatureMatrix, SystemSignature};

/// Default bound on `n + m` for exhaustive sign-pattern enumeration.
pub const PATTERN_CAP: usize = 12;
/// Hard bound on `n + m` for targeted enumeration.
const TARGET_CAP: usize = 24;
/// Required smallest eigenvalue of a Frobenius-normalized positive certificate.
pub const SDP_EPS: f64 = 1e-6;
/// `Q` counts as nonsingular when `sigma_min(Q) >= NONSINGULAR_TOL * ||Q||_2`.
pub const NONSINGULAR_TOL: f64 = 1e-8;

const SEARCH_DRAWS: usize = 256;
const SEARCH_SEED: u64 = 0x51_6e_a7_0e;
const KERNEL_DRAWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NecessaryVerdict {
    MayBeSymmetrizable,
    NotSymmetrizable,
}

/// Outcome of the rank test on `Z * W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NecessaryReport {
    pub verdict: NecessaryVerdict,
    /// Numerical rank of the Khatri-Rao product `Z * W`.
    pub rank: usize,
    /// Its column count `sum t_j^2`.
    pub columns: usize,
    /// Dimension of the certificate subspace (kernel restricted to
    /// admissible block structures).
    pub kernel_dim: usize,
}

/// Modal coordinates of a solution subspace: `Q_k = V X_k V^T`.
#[derive(Debug, Clone)]
pub struct ModalCoords {
    pub v: Mat,
    pub sizes: Vec<usize>,
    pub x: Vec<Mat>,
}

/// All symmetric `Q` with `P Q = Q P^T` and `Q12 = 0`.
#[derive(Debug, Clone)]
pub struct SolutionSubspace {
    pub basis: Vec<Mat>,
    /// Present when the subspace was computed through the modal basis.
    pub modal: Option<ModalCoords>,
    pub n: usize,
    pub m: usize,
}

impl SolutionSubspace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn combine(&self, c: &[f64]) -> Mat {
        let q = self.n + self.m;
        self.basis.iter().zip(c).fold(Mat::zeros(q, q), |acc, (b, &ck)| acc + b * ck)
    }

    /// Stacked `vec(X_j)` of the combination, i.e. its point in `ker(Z * W)`.
    pub fn kernel_point(&self, c: &[f64]) -> Option<Vec<f64>> {
        let modal = self.modal.as_ref()?;
        let dim = modal.v.nrows();
        let x = modal.x.iter().zip(c).fold(Mat::zeros(dim, dim), |acc, (b, &ck)| acc + b * ck);
        let mut out = Vec::new();
        let mut o = 0;
        for &t in &modal.sizes {
            out.extend(x.view((o, o), (t, t)).iter().copied());
            o += t;
        }
        Some(out)
    }

    /// Frobenius-orthonormal basis of the same span.
    fn orthonormal_basis(&self) -> Vec<Mat> {
        let q = self.n + self.m;
        if self.basis.is_empty() {
            return Vec::new();
        }
        let cols: Vec<DVector<f64>> = self.basis.iter().map(linalg::vec_of).collect();
        let stacked = Mat::from_columns(&cols);
        let o = linalg::orth(&stacked, KERNEL_TOL);
        o.column_iter()
            .map(|c| linalg::symmetrize_part(&Mat::from_column_slice(q, q, c.as_slice())))
            .collect()
    }
}

/// Real-to-real residual norms of a certificate, all relative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Residuals {
    /// `|P Q - Q P^T| / (|P| |Q|)`.
    pub commute: f64,
    /// `|Q12| / |Q|`.
    pub offdiag: f64,
    /// `|Q11 + T Sigma_i T^T| / |Q|`.
    pub q13: f64,
    /// `|Q22 - K Sigma_e K^T| / |Q|`.
    pub q14: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.commute.max(self.offdiag).max(self.q13).max(self.q14)
    }
}

/// Gains recovered from a certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct Gains {
    pub t: Mat,
    pub k: Mat,
    pub sigma_i: SignatureMatrix,
    pub sigma_e: SignatureMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymmetrizabilityCertificate {
    pub q: Mat,
    pub t: Mat,
    pub k: Mat,
    pub sigma_i: SignatureMatrix,
    pub sigma_e: SignatureMatrix,
    /// `i(Sigma)` for `Sigma = diag(-Sigma_i, Sigma_e)`.
    pub signature: i64,
    pub x: Option<Vec<f64>>,
    pub residuals: Residuals,
}

#[derive(Serialize, Deserialize)]
struct CertificateDoc {
    #[serde(rename = "Q")]
    q: Vec<Vec<f64>>,
    #[serde(rename = "T")]
    t: Vec<Vec<f64>>,
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    sigma_i: SignatureMatrix,
    sigma_e: SignatureMatrix,
    signature: i64,
    x: Option<Vec<f64>>,
    residuals: Residuals,
}

impl SymmetrizabilityCertificate {
    /// Builds the certificate for `q`, recovering gains and residuals.
    pub fn from_q(p: &SystemMatrix, q: Mat, x: Option<Vec<f64>>) -> Result<Self> {
        let q = linalg::symmetrize_part(&q);
        let gains = gains_from_q(&q, p.n, p.m)?;
        let residuals = residuals(p, &q, &gains);
        let signature = SystemSignature {
            sigma_i: gains.sigma_i.clone(),
            sigma_e: gains.sigma_e.clone(),
        }
        .signature();
        Ok(Self {
            q,
            t: gains.t,
            k: gains.k,
            sigma_i: gains.sigma_i,
            sigma_e: gains.sigma_e,
            signature,
            x,
            residuals,
        })
    }

    pub fn system_signature(&self) -> SystemSignature {
        SystemSignature {
            sigma_i: self.sigma_i.clone(),
            sigma_e: self.sigma_e.clone(),
        }
    }

    /// Residuals of this certificate against another system matrix.
    pub fn residuals_for(&self, p: &SystemMatrix) -> Residuals {
        let gains = Gains {
            t: self.t.clone(),
            k: self.k.clone(),
            sigma_i: self.sigma_i.clone(),
            sigma_e: self.sigma_e.clone(),
        };
        residuals(p, &self.q, &gains)
    }

    pub fn to_json(&self) -> String {
        let doc = CertificateDoc {
            q: rows_of(&self.q),
            t: rows_of(&self.t),
            k: rows_of(&self.k),
            sigma_i: self.sigma_i.clone(),
            sigma_e: self.sigma_e.clone(),
            signature: self.signature,
            x: self.x.clone(),
            residuals: self.residuals,
        };
        serde_json::to_string_pretty(&doc).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CertificateDoc = serde_json::from_str(text)?;
        let (n, m) = (doc.sigma_i.len(), doc.sigma_e.len());
        let q = mat_from_rows("Q", &doc.q, n + m, n + m)?;
        let t = mat_from_rows("T", &doc.t, n, n)?;
        let k = mat_from_rows("K", &doc.k, m, m)?;
        Ok(Self {
            q,
            t,
            k,
            sigma_i: doc.sigma_i,
            sigma_e: doc.sigma_e,
            signature: doc.signature,
            x: doc.x,
            residuals: doc.residuals,
        })
    }
}

fn residuals(p: &SystemMatrix, q: &Mat, g: &Gains) -> Residuals {
    let (n, m) = (p.n, p.m);
    let qn = linalg::max_abs(q).max(f64::MIN_POSITIVE);
    let pn = linalg::max_abs(&p.p).max(f64::MIN_POSITIVE);
    let q11 = q.view((0, 0), (n, n));
    let q22 = q.view((n, n), (m, m));
    let q12 = q.view((0, n), (n, m)).into_owned();
    let commute = linalg::max_abs(&(&p.p * q - q * p.p.transpose())) / (pn * qn);
    let q13 = linalg::max_abs(&(q11 + &g.t * g.sigma_i.to_matrix() * g.t.transpose())) / qn;
    let q14 = linalg::max_abs(&(q22 - &g.k * g.sigma_e.to_matrix() * g.k.transpose())) / qn;
    Residuals {
        commute,
        offdiag: linalg::max_abs(&q12) / qn,
        q13,
        q14,
    }
}

/// Factors the diagonal blocks of `q` into `T`, `K` and signature matrices.
///
/// `Q11 = F1 D1 F1^T`, `Q22 = F2 D2 F2^T` with eigenvalues descending;
/// `T = F1 |D1|^(1/2)`, `K = F2 |D2|^(1/2)`, `Sigma_i = -sgn(D1)`,
/// `Sigma_e = sgn(D2)`.
pub fn gains_from_q(q: &Mat, n: usize, m: usize) -> Result<Gains> {
    if q.shape() != (n + m, n + m) {
        return Err(Error::Dimension(format!("Q must be {0}x{0}", n + m)));
    }
    let scale = linalg::singular_values(q).first().copied().unwrap_or(0.0);
    let factor = |blk: Mat, name: &'static str| -> Result<(Mat, Vec<f64>)> {
        let (vals, vecs) = linalg::sym_eig_desc(&blk);
        if scale == 0.0 || vals.iter().any(|v| v.abs() <= NONSINGULAR_TOL * scale) {
            return Err(Error::SingularBlock(name));
        }
        let root = Mat::from_diagonal(&vals.map(|v| v.abs().sqrt()));
        Ok((vecs * root, vals.iter().copied().collect()))
    };
    let (t, d1) = factor(q.view((0, 0), (n, n)).into_owned(), "Q11")?;
    let (k, d2) = factor(q.view((n, n), (m, m)).into_owned(), "Q22")?;
    Ok(Gains {
        t,
        k,
        sigma_i: SignatureMatrix::from_signs(d1.iter().map(|v| -v)),
        sigma_e: SignatureMatrix::from_signs(d2),
    })
}

/// Basis of symmetric `X_j` commuting with group `g`'s real block.
///
/// For a real group `J = lambda I` only symmetry constrains `X_j`; for a
/// complex pair the constraint reduces to `R X + X R = 0` with `R` the
/// normalized rotation part of `J`.
fn admissible_block(g: &EigGroup) -> Mat {
    let t = g.size();
    let r = if g.is_real() {
        Mat::zeros(t, t)
    } else {
        (g.ideal_block() - Mat::identity(t, t) * g.value.re) / g.value.im
    };
    let mut ops = Mat::zeros(2 * t * t, t * t);
    for col in 0..t * t {
        let mut e = Mat::zeros(t, t);
        e[(col % t, col / t)] = 1.0;
        let commute = &r * &e - &e * r.transpose();
        let skew = &e - e.transpose();
        for (i, v) in commute.iter().chain(skew.iter()).enumerate() {
            ops[(i, col)] = *v;
        }
    }
    spectral::kernel(&ops, KERNEL_TOL)
}

struct Structured {
    es: EigStructure,
    /// `blockdiag(S_j)` mapping block coordinates to stacked `vec(X_j)`.
    s: Mat,
    kr: Mat,
}

impl Structured {
    fn new(p: &SystemMatrix) -> Result<Self> {
        let es = spectral::eig_structure(p, EIG_TOL)?;
        let blocks: Vec<Mat> = es.groups.iter().map(admissible_block).collect();
        let s = linalg::block_diag(&blocks);
        let kr = es.khatri_rao();
        Ok(Self { es, s, kr })
    }

    fn restricted(&self) -> Mat {
        &self.kr * &self.s
    }

    fn x_of(&self, c: &DVector<f64>) -> Mat {
        let y = &self.s * c;
        let blocks: Vec<Mat> = self
            .es
            .sizes()
            .iter()
            .scan(0, |o, &t| {
                let blk = Mat::from_column_slice(t, t, &y.as_slice()[*o..*o + t * t]);
                *o += t * t;
                Some(linalg::symmetrize_part(&blk))
            })
            .collect();
        linalg::block_diag(&blocks)
    }
}

/// Rank test on `Z * W`.
///
/// The verdict is `NotSymmetrizable` when no nonzero block-diagonal `X`
/// with admissible blocks satisfies `(Z * W) x = 0`. For distinct real
/// eigenvalues this is exactly full column rank of `Z * W`.
pub fn necessary_test(p: &SystemMatrix) -> Result<NecessaryReport> {
    let st = Structured::new(p)?;
    let columns = st.kr.ncols();
    let rank = linalg::rank(&st.kr, KERNEL_TOL);
    let kernel_dim = spectral::kernel(&st.restricted(), KERNEL_TOL).ncols();
    let verdict = if kernel_dim == 0 {
        NecessaryVerdict::NotSymmetrizable
    } else {
        NecessaryVerdict::MayBeSymmetrizable
    };
    Ok(NecessaryReport {
        verdict,
        rank,
        columns,
        kernel_dim,
    })
}

/// Certificate subspace through the modal basis, `Q = V X V^T`.
pub fn solution_subspace(p: &SystemMatrix) -> Result<SolutionSubspace> {
    let st = Structured::new(p)?;
    let kern = spectral::kernel(&st.restricted(), KERNEL_TOL);
    let mut basis = Vec::with_capacity(kern.ncols());
    let mut xs = Vec::with_capacity(kern.ncols());
    for c in kern.column_iter() {
        let x = st.x_of(&c.into_owned());
        basis.push(linalg::symmetrize_part(&(&st.es.v * &x * st.es.v.transpose())));
        xs.push(x);
    }
    Ok(SolutionSubspace {
        basis,
        modal: Some(ModalCoords {
            v: st.es.v.clone(),
            sizes: st.es.sizes(),
            x: xs,
        }),
        n: p.n,
        m: p.m,
    })
}

/// Certificate subspace as the kernel of `(Q11, Q22) -> P Q - Q P^T`.
///
/// Needs no eigendecomposition, so it also covers defective `P`.
pub fn direct_subspace(p: &SystemMatrix) -> SolutionSubspace {
    let (n, m) = (p.n, p.m);
    let q = n + m;
    let mut units = Vec::new();
    for (off, size) in [(0, n), (n, m)] {
        for i in 0..size {
            for j in i..size {
                let mut e = Mat::zeros(q, q);
                e[(off + i, off + j)] = 1.0;
                e[(off + j, off + i)] = 1.0;
                units.push(e);
            }
        }
    }
    let rows = q * (q - 1) / 2;
    let mut op = Mat::zeros(rows.max(1), units.len());
    for (col, e) in units.iter().enumerate() {
        let c = &p.p * e - e * p.p.transpose();
        let mut r = 0;
        for i in 0..q {
            for j in i + 1..q {
                op[(r, col)] = c[(i, j)];
                r += 1;
            }
        }
    }
    let kern = spectral::kernel(&op, KERNEL_TOL);
    let basis = kern
        .column_iter()
        .map(|c| units.iter().zip(c.iter()).fold(Mat::zeros(q, q), |acc, (e, &v)| acc + e * v))
        .collect();
    SolutionSubspace {
        basis,
        modal: None,
        n,
        m,
    }
}

fn distinct_real(p: &SystemMatrix) -> Result<(EigStructure, Mat)> {
    let es = spectral::eig_structure(p, EIG_TOL)?;
    if !es.is_distinct_real() {
        return Err(Error::WrongStructure(
            "system matrix does not have distinct real eigenvalues".into(),
        ));
    }
    let kern = spectral::kernel(&es.khatri_rao(), KERNEL_TOL);
    Ok((es, kern))
}

/// Sign pattern with `e_0 = +1` and bit `q - 1 - j` of `mask` marking
/// `e_j = -1`, so increasing masks walk patterns lexicographically.
fn canonical_pattern(q: usize, mask: u64) -> Vec<i8> {
    (0..q)
        .map(|j| if j > 0 && (mask >> (q - 1 - j)) & 1 == 1 { -1 } else { 1 })
        .collect()
}

fn pattern_sum(q: usize, mask: u64) -> i64 {
    q as i64 - 2 * i64::from(mask.count_ones())
}

fn check_target(q: usize, target: i64) -> Result<()> {
    if target.unsigned_abs() as usize > q || (q as i64 - target) % 2 != 0 {
        return Err(Error::Value(format!(
            "signature {target} is impossible for a {q}x{q} system matrix"
        )));
    }
    Ok(())
}

/// A kernel point with all entries well away from zero, by random draws.
fn generic_kernel_point(kern: &Mat) -> Option<DVector<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    (0..KERNEL_DRAWS)
        .map(|_| {
            let c = DVector::from_fn(kern.ncols(), |_, _| rng.sample::<f64, _>(StandardNormal));
            kern * c
        })
        .map(|x| {
            let lo = x.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
            let hi = x.amax();
            (if hi > 0.0 { lo / hi } else { 0.0 }, x)
        })
        .filter(|(ratio, _)| *ratio >= 1e-6)
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .map(|(_, x)| x)
}

fn certificate_from_x(p: &SystemMatrix, es: &EigStructure, x: DVector<f64>) -> Result<SymmetrizabilityCertificate> {
    let scale = x.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
    let x = x / scale;
    let q = &es.v * Mat::from_diagonal(&x) * es.v.transpose();
    SymmetrizabilityCertificate::from_q(p, q, Some(x.iter().copied().collect()))
}

/// Exact decision for system matrices with distinct real eigenvalues.
///
/// With a target signature, sign patterns summing to the target are tried
/// in lexicographic order. Without one, a random kernel combination is
/// tried first and full enumeration (bounded by [`PATTERN_CAP`]) is the
/// fallback. The returned `x` is scaled so `min |x_j| = 1`.
pub fn decide_distinct_real(p: &SystemMatrix, target: Option<i64>) -> Result<SymmetrizabilityCertificate> {
    let (es, kern) = distinct_real(p)?;
    let q = p.dim();
    if let Some(t) = target {
        check_target(q, t)?;
    }
    if kern.ncols() == 0 {
        return Err(Error::NotSymmetrizable);
    }
    let x = match target {
        Some(t) => {
            if q > TARGET_CAP {
                return Err(Error::PatternLimitExceeded { size: q, cap: TARGET_CAP });
            }
            let masks: Vec<u64> = (0..1u64 << (q - 1))
                .filter(|&mk| pattern_sum(q, mk).abs() == t.abs())
                .collect();
            let hit = par::find_map_first(&masks, |&mk| {
                let mut e = canonical_pattern(q, mk);
                if pattern_sum(q, mk) != t {
                    e.iter_mut().for_each(|v| *v = -*v);
                }
                lp::feasible_point(&kern, &e)
            });
            hit.ok_or(Error::TargetSignatureUnreached { target: t })?
        }
        None => match generic_kernel_point(&kern) {
            Some(x) => x,
            None => {
                if q > PATTERN_CAP {
                    return Err(Error::PatternLimitExceeded { size: q, cap: PATTERN_CAP });
                }
                let masks: Vec<u64> = (0..1u64 << (q - 1)).collect();
                par::find_map_first(&masks, |&mk| lp::feasible_point(&kern, &canonical_pattern(q, mk)))
                    .ok_or(Error::NotSymmetrizable)?
            }
        },
    };
    certificate_from_x(p, &es, x)
}

/// How to evaluate independent sign patterns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sweep {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled.
    Parallel,
}

/// Every `sum_j sgn(x_j)` over kernel points with no zero entry.
pub fn achievable_signatures(p: &SystemMatrix, cap: usize) -> Result<BTreeSet<i64>> {
    achievable_signatures_with(p, cap, Sweep::Parallel)
}

pub fn achievable_signatures_with(p: &SystemMatrix, cap: usize, sweep: Sweep) -> Result<BTreeSet<i64>> {
    let (_, kern) = distinct_real(p)?;
    let q = p.dim();
    if q > cap.min(63) {
        return Err(Error::PatternLimitExceeded { size: q, cap });
    }
    if kern.ncols() == 0 {
        return Ok(BTreeSet::new());
    }
    let masks: Vec<u64> = (0..1u64 << (q - 1)).collect();
    let test = |&mk: &u64| lp::feasible_point(&kern, &canonical_pattern(q, mk)).map(|_| pattern_sum(q, mk));
    let found = match sweep {
        Sweep::Sequential => par::map_seq(&masks, test),
        Sweep::Parallel => par::map(&masks, test),
    };
    Ok(found.into_iter().flatten().flat_map(|s| [s, -s]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompleteRoute {
    /// All-positive sign pattern on `ker(Z * W)`.
    Lp,
    /// Semidefinite program over the certificate subspace.
    Sdp,
}

/// A positive definite certificate.
#[derive(Debug, Clone)]
pub struct CompleteSolution {
    pub q: Mat,
    /// Smallest `x_j` (LP route) or smallest eigenvalue of the normalized
    /// combination (SDP route).
    pub margin: f64,
    pub route: CompleteRoute,
}

/// Finds `Q > 0` with `P Q = Q P^T` and `Q12 = 0`.
///
/// Distinct real spectra use the LP with the all-ones pattern; other
/// diagonalizable matrices use the SDP on the modal subspace and defective
/// ones the SDP on the direct subspace.
pub fn complete_symmetrizability(p: &SystemMatrix) -> Result<CompleteSolution> {
    match spectral::eig_structure(p, EIG_TOL) {
        Ok(es) if es.is_distinct_real() => {
            let kern = spectral::kernel(&es.khatri_rao(), KERNEL_TOL);
            let ones = vec![1i8; p.dim()];
            let (x, margin) = lp::max_margin(&kern, &ones).ok_or(Error::NotCompletelySymmetrizable)?;
            if margin <= LP_MARGIN {
                return Err(Error::NotCompletelySymmetrizable);
            }
            let q = &es.v * Mat::from_diagonal(&(x / margin)) * es.v.transpose();
            Ok(CompleteSolution {
                q: linalg::symmetrize_part(&q),
                margin,
                route: CompleteRoute::Lp,
            })
        }
        Ok(_) => complete_over(&solution_subspace(p)?),
        Err(Error::Defective { .. }) => complete_over(&direct_subspace(p)),
        Err(e) => Err(e),
    }
}

/// SDP on the direct subspace regardless of the spectrum.
pub fn complete_symmetrizability_sdp(p: &SystemMatrix) -> Result<CompleteSolution> {
    complete_over(&direct_subspace(p))
}

fn complete_over(sub: &SolutionSubspace) -> Result<CompleteSolution> {
    let basis = sub.orthonormal_basis();
    if basis.is_empty() {
        return Err(Error::NotCompletelySymmetrizable);
    }
    let out = sdp::max_min_eigenvalue(&basis)?;
    if out.margin <= SDP_EPS {
        return Err(Error::NotCompletelySymmetrizable);
    }
    let q = basis.iter().zip(out.coeffs.iter()).fold(Mat::zeros(basis[0].nrows(), basis[0].ncols()), |acc, (b, &c)| acc + b * c);
    Ok(CompleteSolution {
        q,
        margin: out.margin,
        route: CompleteRoute::Sdp,
    })
}

/// Seeded random search over the subspace for a well-conditioned `Q`,
/// optionally with a given signature.
fn search_subspace(sub: &SolutionSubspace, target: Option<i64>) -> Result<(Mat, Option<Vec<f64>>)> {
    if sub.is_empty() {
        return Err(Error::NotSymmetrizable);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEARCH_SEED);
    let draws: Vec<Vec<f64>> = (0..SEARCH_DRAWS)
        .map(|_| (0..sub.dim()).map(|_| rng.sample(StandardNormal)).collect())
        .collect();
    let scored = par::map(&draws, |c| {
        let q = sub.combine(c);
        let eig = linalg::sym_eig(&q).eigenvalues;
        let hi = eig.amax();
        let lo = eig.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
        let sig = eig.iter().map(|v| v.signum() as i64).sum::<i64>();
        (if hi > 0.0 { lo / hi } else { 0.0 }, sig)
    });
    let best = |want: Option<i64>| {
        scored
            .iter()
            .enumerate()
            .filter(|(_, (ratio, sig))| *ratio >= NONSINGULAR_TOL && want.is_none_or(|w| *sig == w))
            .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
            .map(|(i, _)| i)
    };
    let pick = match (best(target), target) {
        (Some(i), _) => i,
        (None, Some(t)) if best(None).is_some() => return Err(Error::TargetSignatureUnreached { target: t }),
        _ => return Err(Error::NotSymmetrizable),
    };
    let c = &draws[pick];
    Ok((sub.combine(c), sub.kernel_point(c)))
}

/// Certificate for `P` by the route matching its spectrum.
pub fn certify(p: &SystemMatrix, target: Option<i64>, complete: bool) -> Result<SymmetrizabilityCertificate> {
    let q = p.dim();
    if let Some(t) = target {
        check_target(q, t)?;
    }
    if complete {
        if target.is_some_and(|t| t != q as i64) {
            return Err(Error::Value(format!(
                "a positive definite certificate has signature {q}"
            )));
        }
        let sol = complete_symmetrizability(p)?;
        return SymmetrizabilityCertificate::from_q(p, sol.q, None);
    }
    let es = spectral::eig_structure(p, EIG_TOL)?;
    if es.is_distinct_real() {
        return decide_distinct_real(p, target);
    }
    let (qm, x) = search_subspace(&solution_subspace(p)?, target)?;
    SymmetrizabilityCertificate::from_q(p, qm, x)
}

/// End-to-end: certificate, gains, and the transformed (symmetric) system.
pub fn symmetrize(
    ss: &StateSpace,
    target: Option<i64>,
    complete: bool,
) -> Result<(StateSpace, SymmetrizabilityCertificate)> {
    ss.ensure_minimal()?;
    let p = system_matrix(ss);
    let cert = certify(&p, target, complete)?;
    let out = apply_io_transform(ss, &cert.k, &cert.t)?;
    Ok((out, cert))
}
