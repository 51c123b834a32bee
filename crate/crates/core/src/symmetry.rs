//! External (transfer-function) and internal (system-matrix) symmetry
//! tests, and the parity solver that recovers signature matrices.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::statespace::{sample_points, transfer_eval, StateSpace, SystemMatrix};

/// Default relative threshold separating zero from nonzero entries.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Diagonal matrix with entries in {-1, +1}.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignatureMatrix(Vec<i8>);

impl SignatureMatrix {
    pub fn new(diag: Vec<i8>) -> Result<Self> {
        if diag.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Value(format!("signature entries must be ±1, got {diag:?}")));
        }
        Ok(Self(diag))
    }

    pub fn identity(q: usize) -> Self {
        Self(vec![1; q])
    }

    pub fn diag(&self) -> &[i8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `n_+ - n_-`.
    pub fn signature(&self) -> i64 {
        self.0.iter().map(|&v| v as i64).sum()
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|v| -v).collect())
    }

    pub fn to_matrix(&self) -> Mat {
        Mat::from_diagonal(&nalgebra::DVector::from_iterator(self.len(), self.0.iter().map(|&v| v as f64)))
    }

    /// Signature of the sign vector of `values` (entries must be nonzero).
    pub fn from_signs(values: impl IntoIterator<Item = f64>) -> Self {
        Self(values.into_iter().map(|v| if v < 0.0 { -1 } else { 1 }).collect())
    }
}

impl TryFrom<Vec<i8>> for SignatureMatrix {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<SignatureMatrix> for Vec<i8> {
    fn from(s: SignatureMatrix) -> Self {
        s.0
    }
}

/// System inertia `Sigma = diag(-Sigma_i, Sigma_e)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemSignature {
    pub sigma_i: SignatureMatrix,
    pub sigma_e: SignatureMatrix,
}

impl SystemSignature {
    /// Splits a full `(n+m)` witness into internal and external parts.
    pub fn from_full(sigma: &SignatureMatrix, n: usize) -> Self {
        let d = sigma.diag();
        Self {
            sigma_i: SignatureMatrix(d[..n].iter().map(|v| -v).collect()),
            sigma_e: SignatureMatrix(d[n..].to_vec()),
        }
    }

    pub fn full(&self) -> SignatureMatrix {
        SignatureMatrix(self.sigma_i.0.iter().map(|v| -v).chain(self.sigma_e.0.iter().copied()).collect())
    }

    /// `i(Sigma)`.
    pub fn signature(&self) -> i64 {
        self.full().signature()
    }

    pub fn negated(&self) -> Self {
        Self {
            sigma_i: self.sigma_i.negated(),
            sigma_e: self.sigma_e.negated(),
        }
    }
}

/// Constraints `sigma_i * sigma_j = parity` over `q` sign variables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SignConstraintGraph {
    q: usize,
    edges: Vec<(usize, usize, i8)>,
    conflicts: Vec<(usize, usize)>,
}

impl SignConstraintGraph {
    pub fn new(q: usize) -> Self {
        Self { q, ..Self::default() }
    }

    pub fn nodes(&self) -> usize {
        self.q
    }

    pub fn edges(&self) -> &[(usize, usize, i8)] {
        &self.edges
    }

    /// Pairs that were added twice with contradicting parity.
    pub fn conflicts(&self) -> &[(usize, usize)] {
        &self.conflicts
    }

    /// Adds `sigma_i * sigma_j = parity`. Self-loops are rejected.
    pub fn add(&mut self, i: usize, j: usize, parity: i8) -> Result<()> {
        if i == j || i >= self.q || j >= self.q {
            return Err(Error::Value(format!("invalid edge ({i}, {j}) for {} nodes", self.q)));
        }
        if parity != 1 && parity != -1 {
            return Err(Error::Value(format!("parity must be ±1, got {parity}")));
        }
        let key = (i.min(j), i.max(j));
        if let Some(&(_, _, p)) = self.edges.iter().find(|&&(a, b, _)| (a.min(b), a.max(b)) == key) {
            if p != parity && !self.conflicts.contains(&key) {
                self.conflicts.push(key);
            }
            return Ok(());
        }
        self.edges.push((i, j, parity));
        Ok(())
    }
}

/// Union-find tracking each node's parity relative to its root.
struct ParityDsu {
    parent: Vec<usize>,
    odd: Vec<bool>,
    size: Vec<usize>,
}

impl ParityDsu {
    fn new(q: usize) -> Self {
        Self {
            parent: (0..q).collect(),
            odd: vec![false; q],
            size: vec![1; q],
        }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (root, p_odd) = self.find(p);
        self.odd[x] ^= p_odd;
        self.parent[x] = root;
        (root, self.odd[x])
    }

    /// Returns false when the constraint contradicts earlier ones.
    fn union(&mut self, a: usize, b: usize, odd: bool) -> bool {
        let (ra, pa) = self.find(a);
        let (rb, pb) = self.find(b);
        if ra == rb {
            return pa ^ pb == odd;
        }
        let (big, small) = if self.size[ra] >= self.size[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[small] = big;
        self.odd[small] = pa ^ pb ^ odd;
        self.size[big] += self.size[small];
        true
    }
}

/// Solves the parity constraints; each component's smallest node gets +1.
///
/// On infeasibility returns [`Error::Infeasible`] carrying an odd cycle.
pub fn sign_consistency(g: &SignConstraintGraph) -> Result<SignatureMatrix> {
    if let Some(&(i, j)) = g.conflicts.first() {
        return Err(Error::Infeasible { cycle: vec![i, j] });
    }
    let mut dsu = ParityDsu::new(g.q);
    let mut accepted: Vec<Vec<usize>> = vec![Vec::new(); g.q];
    for &(i, j, p) in &g.edges {
        if !dsu.union(i, j, p < 0) {
            let mut cycle = tree_path(&accepted, i, j);
            cycle.push(i);
            return Err(Error::Infeasible { cycle });
        }
        accepted[i].push(j);
        accepted[j].push(i);
    }
    let mut root_sign = vec![0i8; g.q];
    let mut sigma = vec![0i8; g.q];
    for (x, s) in sigma.iter_mut().enumerate() {
        let (root, odd) = dsu.find(x);
        let rel = if odd { -1 } else { 1 };
        if root_sign[root] == 0 {
            // x is the smallest node of its component
            root_sign[root] = rel;
        }
        *s = root_sign[root] * rel;
    }
    Ok(SignatureMatrix(sigma))
}

fn tree_path(adj: &[Vec<usize>], from: usize, to: usize) -> Vec<usize> {
    let mut prev = vec![usize::MAX; adj.len()];
    prev[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            break;
        }
        for &y in &adj[x] {
            if prev[y] == usize::MAX {
                prev[y] = x;
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    let mut cur = to;
    while cur != from {
        cur = prev[cur];
        path.push(cur);
    }
    path.reverse();
    path
}

/// Finds `Sigma = diag(-Sigma_i, Sigma_e)` with `Sigma P = P^T Sigma`.
pub fn check_internal_symmetry(p: &SystemMatrix, tol: f64) -> Result<SystemSignature> {
    let q = p.dim();
    let scale = linalg::max_abs(&p.p);
    let mut g = SignConstraintGraph::new(q);
    let cut = tol * scale;
    for i in 0..q {
        for j in i + 1..q {
            let (pij, pji) = (p.p[(i, j)], p.p[(j, i)]);
            if pij.abs().max(pji.abs()) <= cut {
                continue;
            }
            if (pij.abs() - pji.abs()).abs() > cut {
                return Err(Error::NotSymmetric(format!("|P[{i},{j}]| != |P[{j},{i}]|")));
            }
            let parity = if pij * pji > 0.0 { 1 } else { -1 };
            g.add(i, j, parity)?;
        }
    }
    let sigma = sign_consistency(&g).map_err(|e| match e {
        Error::Infeasible { cycle } => Error::NotSymmetric(format!("sign parity conflict along {cycle:?}")),
        other => other,
    })?;
    let s = sigma.to_matrix();
    let residual = linalg::max_abs(&(&s * &p.p - p.p.transpose() * &s));
    if residual > cut {
        return Err(Error::NotSymmetric(format!("residual {residual:e} exceeds tolerance")));
    }
    Ok(SystemSignature::from_full(&sigma, p.n))
}

/// Finds `Sigma_e` with `Sigma_e G(s)^T = G(s) Sigma_e` on the standard
/// sample set.
pub fn check_external_symmetry(ss: &StateSpace, tol: f64) -> Result<SignatureMatrix> {
    let m = ss.m();
    if m == 1 {
        return Ok(SignatureMatrix::identity(1));
    }
    let samples: Vec<_> = sample_points(ss)
        .into_iter()
        .map(|s| transfer_eval(ss, s))
        .collect::<Result<_>>()?;
    let scale = samples.iter().map(linalg::cmax_abs).fold(0.0_f64, f64::max);
    let mut g = SignConstraintGraph::new(m);
    for i in 0..m {
        for j in i + 1..m {
            let mag = samples
                .iter()
                .map(|gs| gs[(i, j)].norm().max(gs[(j, i)].norm()))
                .fold(0.0_f64, f64::max);
            if mag <= tol * scale {
                continue;
            }
            let fits = |c: f64| samples.iter().all(|gs| (gs[(i, j)] - gs[(j, i)] * c).norm() <= tol * mag.max(1e-300) * 10.0);
            let parity = if fits(1.0) {
                1
            } else if fits(-1.0) {
                -1
            } else {
                return Err(Error::NotSymmetric(format!("G[{i},{j}] != ±G[{j},{i}]")));
            };
            g.add(i, j, parity)?;
        }
    }
    sign_consistency(&g).map_err(|e| match e {
        Error::Infeasible { cycle } => Error::NotSymmetric(format!("sign parity conflict along {cycle:?}")),
        other => other,
    })
}
