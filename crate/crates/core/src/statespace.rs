//! State-space models, their JSON form, transfer-function evaluation and
//! fixture builders.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMat, Mat};
use crate::symmetry::SignatureMatrix;

/// Relative rank tolerance for controllability/observability checks.
pub const MINIMALITY_TOL: f64 = 1e-10;

/// Minimum distance kept between transfer-function sample points and the
/// eigenvalues of `A`.
pub const POLE_CLEARANCE: f64 = 1e-3;

const SAMPLE_SEED: u64 = 0x5eed_0f5a_3b1e;

/// A continuous-time LTI system with as many inputs as outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct StateSpace {
    a: Mat,
    b: Mat,
    c: Mat,
    d: Mat,
}

impl StateSpace {
    pub fn new(a: Mat, b: Mat, c: Mat, d: Mat) -> Result<Self> {
        let n = a.nrows();
        if n == 0 || a.ncols() != n {
            return Err(Error::Dimension(format!("A must be square and non-empty, got {:?}", a.shape())));
        }
        let m = d.nrows();
        if m == 0 || d.ncols() != m {
            return Err(Error::Dimension(format!("D must be square and non-empty, got {:?}", d.shape())));
        }
        if b.shape() != (n, m) {
            return Err(Error::Dimension(format!("B must be {n}x{m}, got {:?}", b.shape())));
        }
        if c.shape() != (m, n) {
            return Err(Error::Dimension(format!("C must be {m}x{n}, got {:?}", c.shape())));
        }
        for (name, mat) in [("A", &a), ("B", &b), ("C", &c), ("D", &d)] {
            if mat.iter().any(|v| !v.is_finite()) {
                return Err(Error::Value(format!("{name} has non-finite entries")));
            }
        }
        Ok(Self { a, b, c, d })
    }

    pub fn a(&self) -> &Mat {
        &self.a
    }
    pub fn b(&self) -> &Mat {
        &self.b
    }
    pub fn c(&self) -> &Mat {
        &self.c
    }
    pub fn d(&self) -> &Mat {
        &self.d
    }
    /// State dimension.
    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    /// Input (= output) dimension.
    pub fn m(&self) -> usize {
        self.d.nrows()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        load_system(text)
    }

    pub fn to_json(&self) -> String {
        let doc = SystemDoc {
            n: self.n(),
            m: self.m(),
            a: rows_of(&self.a),
            b: rows_of(&self.b),
            c: rows_of(&self.c),
            d: rows_of(&self.d),
        };
        serde_json::to_string_pretty(&doc).expect("matrices serialize")
    }

    pub fn controllability_rank(&self) -> usize {
        let n = self.n();
        let mut blocks = Vec::with_capacity(n);
        let mut cur = self.b.clone();
        for _ in 0..n {
            let scale = linalg::max_abs(&cur);
            blocks.push(if scale > 0.0 { &cur / scale } else { cur.clone() });
            cur = &self.a * cur;
        }
        let mut ctrb = Mat::zeros(n, n * self.m());
        for (k, blk) in blocks.iter().enumerate() {
            ctrb.view_mut((0, k * self.m()), blk.shape()).copy_from(blk);
        }
        linalg::rank(&ctrb, MINIMALITY_TOL)
    }

    pub fn observability_rank(&self) -> usize {
        let dual = StateSpace {
            a: self.a.transpose(),
            b: self.c.transpose(),
            c: self.b.transpose(),
            d: self.d.transpose(),
        };
        dual.controllability_rank()
    }

    pub fn is_minimal(&self) -> bool {
        self.controllability_rank() == self.n() && self.observability_rank() == self.n()
    }

    pub fn ensure_minimal(&self) -> Result<()> {
        if self.controllability_rank() < self.n() {
            return Err(Error::NotMinimal("uncontrollable"));
        }
        if self.observability_rank() < self.n() {
            return Err(Error::NotMinimal("unobservable"));
        }
        Ok(())
    }

    /// Complex eigenvalues of `A`.
    pub fn poles(&self) -> Vec<Complex64> {
        nalgebra::Schur::new(self.a.clone())
            .complex_eigenvalues()
            .iter()
            .copied()
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct SystemDoc {
    n: usize,
    m: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<f64>>,
    #[serde(rename = "C")]
    c: Vec<Vec<f64>>,
    #[serde(rename = "D")]
    d: Vec<Vec<f64>>,
}

pub(crate) fn rows_of(m: &Mat) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

pub(crate) fn mat_from_rows(name: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> Result<Mat> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        let got_cols: Vec<usize> = rows.iter().map(Vec::len).collect();
        return Err(Error::Dimension(format!(
            "{name} must be {nrows}x{ncols}, got {} rows with lengths {got_cols:?}",
            rows.len()
        )));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

/// Parses the JSON system schema `{"n","m","A","B","C","D"}`.
pub fn load_system(text: &str) -> Result<StateSpace> {
    let doc: SystemDoc = serde_json::from_str(text)?;
    if doc.n == 0 || doc.m == 0 {
        return Err(Error::Dimension("n and m must be at least 1".into()));
    }
    let a = mat_from_rows("A", &doc.a, doc.n, doc.n)?;
    let b = mat_from_rows("B", &doc.b, doc.n, doc.m)?;
    let c = mat_from_rows("C", &doc.c, doc.m, doc.n)?;
    let d = mat_from_rows("D", &doc.d, doc.m, doc.m)?;
    StateSpace::new(a, b, c, d)
}

/// The block matrix `[[A, B], [C, D]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemMatrix {
    pub p: Mat,
    pub n: usize,
    pub m: usize,
}

impl SystemMatrix {
    pub fn dim(&self) -> usize {
        self.n + self.m
    }

    /// Splits back into `(A, B, C, D)`.
    pub fn to_state_space(&self) -> Result<StateSpace> {
        let (n, m) = (self.n, self.m);
        StateSpace::new(
            self.p.view((0, 0), (n, n)).into_owned(),
            self.p.view((0, n), (n, m)).into_owned(),
            self.p.view((n, 0), (m, n)).into_owned(),
            self.p.view((n, n), (m, m)).into_owned(),
        )
    }
}

pub fn system_matrix(ss: &StateSpace) -> SystemMatrix {
    let (n, m) = (ss.n(), ss.m());
    let mut p = Mat::zeros(n + m, n + m);
    p.view_mut((0, 0), (n, n)).copy_from(&ss.a);
    p.view_mut((0, n), (n, m)).copy_from(&ss.b);
    p.view_mut((n, 0), (m, n)).copy_from(&ss.c);
    p.view_mut((n, n), (m, m)).copy_from(&ss.d);
    SystemMatrix { p, n, m }
}

/// `G(s) = C (sI - A)^{-1} B + D`.
pub fn transfer_eval(ss: &StateSpace, s: Complex64) -> Result<CMat> {
    let n = ss.n();
    let resolvent = CMat::identity(n, n) * s - linalg::to_complex(&ss.a);
    let sv = resolvent.singular_values();
    let smin = sv.iter().copied().fold(f64::INFINITY, f64::min);
    let smax = sv.iter().copied().fold(0.0_f64, f64::max);
    if smin <= 1e-12 * smax.max(1.0) {
        return Err(Error::SingularResolvent { re: s.re, im: s.im });
    }
    let lu = resolvent.lu();
    let x = lu
        .solve(&linalg::to_complex(&ss.b))
        .ok_or(Error::SingularResolvent { re: s.re, im: s.im })?;
    Ok(linalg::to_complex(&ss.c) * x + linalg::to_complex(&ss.d))
}

/// Standard sample set for transfer-function comparisons: ten log-spaced
/// points on the imaginary axis in `[1e-2, 1e2]` plus seeded random complex
/// points, all kept `POLE_CLEARANCE` away from the poles.
///
/// The random part grows with the state dimension so the total always
/// exceeds `2n + 4`.
pub fn sample_points(ss: &StateSpace) -> Vec<Complex64> {
    let poles = ss.poles();
    let clear = |s: Complex64| poles.iter().all(|p| (s - p).norm() >= POLE_CLEARANCE);
    let mut pts = Vec::new();
    for k in 0..10 {
        let w = 10f64.powf(-2.0 + 4.0 * k as f64 / 9.0);
        let mut s = Complex64::new(0.0, w);
        while !clear(s) {
            s.re += 2.0 * POLE_CLEARANCE;
        }
        pts.push(s);
    }
    let n_random = (2 * ss.n() + 5).saturating_sub(10).max(10);
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    while pts.len() < 10 + n_random {
        let s = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
        if clear(s) {
            pts.push(s);
        }
    }
    pts
}

/// Input-output transformation `(T^-1 A T, T^-1 B K, K^-1 C T, K^-1 D K)`.
///
/// The transfer function of the result is `K^-1 G(s) K`.
pub fn apply_io_transform(ss: &StateSpace, k: &Mat, t: &Mat) -> Result<StateSpace> {
    if k.shape() != (ss.m(), ss.m()) {
        return Err(Error::Dimension(format!("K must be {0}x{0}", ss.m())));
    }
    if t.shape() != (ss.n(), ss.n()) {
        return Err(Error::Dimension(format!("T must be {0}x{0}", ss.n())));
    }
    if linalg::is_singular(k, 1e-12) {
        return Err(Error::SingularTransform("K"));
    }
    if linalg::is_singular(t, 1e-12) {
        return Err(Error::SingularTransform("T"));
    }
    let ki = linalg::inverse(k).ok_or(Error::SingularTransform("K"))?;
    let ti = linalg::inverse(t).ok_or(Error::SingularTransform("T"))?;
    StateSpace::new(
        &ti * &ss.a * t,
        &ti * &ss.b * k,
        &ki * &ss.c * t,
        &ki * &ss.d * k,
    )
}

/// Physical parameters of the quadruple-tank process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TankParams {
    /// Tank cross-sections.
    pub area: [f64; 4],
    /// Tank time constants.
    pub time_const: [f64; 4],
    /// Pump gains k1, k2.
    pub pump_gain: [f64; 2],
    /// Level sensor gain.
    pub sensor_gain: f64,
    /// Valve splits gamma1, gamma2.
    pub valve_split: [f64; 2],
}

impl TankParams {
    pub fn validate(&self) -> Result<()> {
        let positive = self.area.iter().chain(&self.time_const).chain(&self.pump_gain).all(|&v| v > 0.0 && v.is_finite())
            && self.sensor_gain > 0.0
            && self.sensor_gain.is_finite();
        if !positive {
            return Err(Error::Value("areas, time constants and gains must be positive".into()));
        }
        if self.valve_split.iter().any(|&g| !(0.0..1.0).contains(&g)) {
            return Err(Error::Value("valve splits must lie in [0, 1) so that c12, c21 != 0".into()));
        }
        Ok(())
    }

    /// Steady-state gains `[c11, c12, c21, c22]`.
    pub fn coefficients(&self) -> [f64; 4] {
        let [a1, a2, _, _] = self.area;
        let [t1, t2, _, _] = self.time_const;
        let [k1, k2] = self.pump_gain;
        let [g1, g2] = self.valve_split;
        let kc = self.sensor_gain;
        [
            g1 * k1 * t1 * kc / a1,
            (1.0 - g2) * k2 * t1 * kc / a1,
            (1.0 - g1) * k1 * t2 * kc / a2,
            g2 * k2 * t2 * kc / a2,
        ]
    }

    /// Parameters producing the given coefficients with unit areas, unit
    /// sensor gain and the given valve splits. Used by tests that need to
    /// dial in `c12` and `c21` directly.
    pub fn from_coefficients(time_const: [f64; 4], c: [f64; 4]) -> Result<Self> {
        let [t1, t2, _, _] = time_const;
        let [c11, c12, c21, c22] = c;
        // c11 = g1 k1 t1, c21 = (1-g1) k1 t2  =>  k1 = c11/t1 + c21/t2
        let k1 = c11 / t1 + c21 / t2;
        let k2 = c22 / t2 + c12 / t1;
        let g1 = c11 / t1 / k1;
        let g2 = c22 / t2 / k2;
        let p = TankParams {
            area: [1.0; 4],
            time_const,
            pump_gain: [k1, k2],
            sensor_gain: 1.0,
            valve_split: [g1, g2],
        };
        p.validate()?;
        Ok(p)
    }
}

/// Minimal 4-state modal realization of the quadruple-tank transfer matrix
///
/// ```text
/// G(s) = [ c11/(1+sT1)                c12/((1+sT1)(1+sT3)) ]
///        [ c21/((1+sT2)(1+sT4))       c22/(1+sT2)          ]
/// ```
///
/// `A` is diagonal with the poles `-1/T_i`; the off-diagonal entries are
/// split by partial fractions, so `T1 != T3` and `T2 != T4` are required.
pub fn quadruple_tank(p: &TankParams) -> Result<StateSpace> {
    p.validate()?;
    let [t1, t2, t3, t4] = p.time_const;
    let rel = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs());
    if rel(t1, t3) || rel(t2, t4) {
        return Err(Error::Value("modal realization needs T1 != T3 and T2 != T4".into()));
    }
    let [c11, c12, c21, c22] = p.coefficients();
    let a = [1.0 / t1, 1.0 / t2, 1.0 / t3, 1.0 / t4];
    let r12 = c12 / (t1 * t3 * (a[2] - a[0]));
    let r21 = c21 / (t2 * t4 * (a[3] - a[1]));
    let am = Mat::from_diagonal(&DVector::from_iterator(4, a.iter().map(|v| -v)));
    let bm = Mat::from_row_slice(4, 2, &[c11 / t1, r12, r21, c22 / t2, 0.0, -r12, -r21, 0.0]);
    let cm = Mat::from_row_slice(2, 4, &[1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 1.0]);
    let ss = StateSpace::new(am, bm, cm, Mat::zeros(2, 2))?;
    ss.ensure_minimal()?;
    Ok(ss)
}

/// Random minimal system whose system matrix is `Sigma * S` for a random
/// symmetric `S`, hence internally symmetric with witness `sigma`.
pub fn random_symmetric_system(n: usize, m: usize, sigma: &SignatureMatrix, seed: u64) -> Result<StateSpace> {
    const RETRY_CAP: usize = 100;
    if n == 0 || m == 0 {
        return Err(Error::Dimension("n and m must be at least 1".into()));
    }
    if sigma.len() != n + m {
        return Err(Error::Dimension(format!("signature must have {} entries", n + m)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = n + m;
    for _ in 0..RETRY_CAP {
        let mut s = Mat::zeros(q, q);
        for i in 0..q {
            for j in i..q {
                let v: f64 = rng.sample(StandardNormal);
                s[(i, j)] = v;
                s[(j, i)] = v;
            }
        }
        let mut p = s;
        for (i, &sg) in sigma.diag().iter().enumerate() {
            if sg < 0 {
                p.row_mut(i).neg_mut();
            }
        }
        let ss = SystemMatrix { p, n, m }.to_state_space()?;
        if ss.is_minimal() {
            return Ok(ss);
        }
    }
    Err(Error::ExhaustedRetries(RETRY_CAP))
}

/// Random minimal system with i.i.d. standard normal entries.
pub fn random_gaussian_system(n: usize, m: usize, seed: u64) -> Result<StateSpace> {
    const RETRY_CAP: usize = 100;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = n + m;
    for _ in 0..RETRY_CAP {
        let p = Mat::from_fn(q, q, |_, _| rng.sample(StandardNormal));
        let ss = SystemMatrix { p, n, m }.to_state_space()?;
        if ss.is_minimal() {
            return Ok(ss);
        }
    }
    Err(Error::ExhaustedRetries(RETRY_CAP))
}

/// Random minimal relaxation system: `A = -(L L^T + I/10)`, `C = B^T`,
/// `D = M M^T`, so `A < 0`, `D >= 0` and the system is completely
/// symmetric.
pub fn random_relaxation_system(n: usize, m: usize, seed: u64) -> Result<StateSpace> {
    const RETRY_CAP: usize = 100;
    if n == 0 || m == 0 {
        return Err(Error::Dimension("n and m must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = |r: usize, c: usize| Mat::from_fn(r, c, |_, _| rng.sample(StandardNormal));
    for _ in 0..RETRY_CAP {
        let l = gauss(n, n);
        let a = -(&l * l.transpose() + Mat::identity(n, n) * 0.1);
        let b = gauss(n, m);
        let mm = gauss(m, m);
        let ss = StateSpace::new(a, b.clone(), b.transpose(), &mm * mm.transpose())?;
        if ss.is_minimal() {
            return Ok(ss);
        }
    }
    Err(Error::ExhaustedRetries(RETRY_CAP))
}

/// The 2-state, 3-input worked example that is not symmetric but is
/// symmetrizable with signatures {±5, ±3}.
///
/// Rounded to four digits, the entries -0.6333, -0.3833, -1.9083 and 0.4667
/// are the repeating decimals -19/30, -23/60, -229/120 and 7/15; the exact
/// values are used since rounding destroys the two-dimensional kernel.
pub fn worked_example() -> StateSpace {
    let a = Mat::from_row_slice(2, 2, &[3.6, -19.0 / 30.0, -0.3, 3.4]);
    let b = Mat::from_row_slice(2, 3, &[-2.14, 1.32, 3.64, -1.86, 2.28, 9.96]);
    let c = Mat::from_row_slice(3, 2, &[0.05, -23.0 / 60.0, 2.225, -229.0 / 120.0, -0.5, 7.0 / 15.0]);
    let d = Mat::from_row_slice(3, 3, &[2.2, -1.8, -8.4, -2.4, -4.4, -37.2, 0.4, 1.4, 10.2]);
    StateSpace::new(a, b, c, d).expect("worked example is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn siso(a: f64, b: f64, c: f64, d: f64) -> StateSpace {
        let one = |v| Mat::from_element(1, 1, v);
        StateSpace::new(one(a), one(b), one(c), one(d)).unwrap()
    }

    #[test]
    fn load_smallest_system() {
        let ss = load_system(r#"{"n":1,"m":1,"A":[[-1]],"B":[[1]],"C":[[1]],"D":[[0]]}"#).unwrap();
        assert_eq!((ss.n(), ss.m()), (1, 1));
        assert_eq!(ss.a()[(0, 0)], -1.0);
    }

    #[test]
    fn load_rejects_bad_shapes() {
        let err = load_system(r#"{"n":1,"m":2,"A":[[0]],"B":[[1,1]],"C":[[1]],"D":[[0,0]]}"#).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)), "{err:?}");
        let err = load_system(r#"{"n":1,"m":1,"A":[[0]],"B":[[1]],"C":[[1]]"#).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn load_rejects_non_finite() {
        let err = StateSpace::new(
            Mat::from_element(1, 1, f64::NAN),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, 1.0),
            Mat::from_element(1, 1, 0.0),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Value(_)));
    }

    #[test]
    fn worked_example_roundtrips_through_json() {
        let ss = worked_example();
        let back = load_system(&ss.to_json()).unwrap();
        assert_eq!(back, ss);
        assert_eq!((back.n(), back.m()), (2, 3));
    }

    #[test]
    fn system_matrix_blocks() {
        let p = system_matrix(&siso(-1.0, 2.0, 3.0, 4.0));
        assert_eq!(p.p, Mat::from_row_slice(2, 2, &[-1.0, 2.0, 3.0, 4.0]));
        let z = system_matrix(&siso(0.0, 0.0, 0.0, 0.0));
        assert_eq!(z.p, Mat::zeros(2, 2));
        let ex = system_matrix(&worked_example());
        assert_eq!(ex.p.shape(), (5, 5));
        assert_eq!(ex.p[(0, 0)], 3.6);
        assert_eq!(ex.p[(4, 4)], 10.2);
        assert_eq!(ex.to_state_space().unwrap(), worked_example());
    }

    #[test]
    fn transfer_eval_first_order() {
        let ss = siso(-1.0, 1.0, 1.0, 0.0);
        let g = transfer_eval(&ss, Complex64::new(0.0, 0.0)).unwrap();
        assert!((g[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let err = transfer_eval(&ss, Complex64::new(-1.0, 0.0)).unwrap_err();
        assert!(matches!(err, Error::SingularResolvent { .. }));
    }

    #[test]
    fn identity_transform_is_noop() {
        let ss = worked_example();
        let out = apply_io_transform(&ss, &Mat::identity(3, 3), &Mat::identity(2, 2)).unwrap();
        assert_eq!(out, ss);
        let err = apply_io_transform(&ss, &Mat::zeros(3, 3), &Mat::identity(2, 2)).unwrap_err();
        assert_eq!(err, Error::SingularTransform("K"));
    }

    #[test]
    fn scalar_gain_leaves_siso_transfer_unchanged() {
        let ss = siso(-2.0, 3.0, 0.5, 1.0);
        let out = apply_io_transform(&ss, &Mat::from_element(1, 1, 2.0), &Mat::identity(1, 1)).unwrap();
        for s in sample_points(&ss) {
            let g0 = transfer_eval(&ss, s).unwrap();
            let g1 = transfer_eval(&out, s).unwrap();
            assert!((g0 - g1).norm() < 1e-14);
        }
    }

    #[test]
    fn tank_dc_gain_matches_coefficients() {
        let p = TankParams {
            area: [2.0, 3.0, 1.0, 1.0],
            time_const: [10.0, 12.0, 5.0, 3.0],
            pump_gain: [1.5, 2.0],
            sensor_gain: 0.8,
            valve_split: [0.3, 0.6],
        };
        let ss = quadruple_tank(&p).unwrap();
        let [c11, c12, c21, c22] = p.coefficients();
        let g = transfer_eval(&ss, Complex64::new(0.0, 0.0)).unwrap();
        let want = [[c11, c12], [c21, c22]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((g[(i, j)].re - want[i][j]).abs() < 1e-12 * want[i][j].abs().max(1.0));
                assert!(g[(i, j)].im.abs() < 1e-14);
            }
        }
    }

    #[test]
    fn tank_rejects_invalid_parameters() {
        let mut p = TankParams {
            area: [1.0; 4],
            time_const: [10.0, 12.0, 5.0, 3.0],
            pump_gain: [1.0, 1.0],
            sensor_gain: 1.0,
            valve_split: [1.0, 0.5],
        };
        assert!(matches!(quadruple_tank(&p), Err(Error::Value(_))));
        p.valve_split = [0.5, 0.5];
        p.time_const = [10.0, 12.0, 10.0, 3.0];
        assert!(matches!(quadruple_tank(&p), Err(Error::Value(_))));
        p.time_const = [10.0, -12.0, 5.0, 3.0];
        assert!(matches!(quadruple_tank(&p), Err(Error::Value(_))));
    }

    #[test]
    fn from_coefficients_inverts_coefficients() {
        let c = [0.7, 0.4, 0.9, 1.1];
        let p = TankParams::from_coefficients([10.0, 10.0, 5.0, 5.0], c).unwrap();
        for (x, y) in p.coefficients().iter().zip(c) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn random_symmetric_system_is_deterministic() {
        let sigma = SignatureMatrix::identity(2);
        let a = random_symmetric_system(1, 1, &sigma, 0).unwrap();
        let b = random_symmetric_system(1, 1, &sigma, 0).unwrap();
        assert_eq!(a, b);
        let p = system_matrix(&a).p;
        assert_eq!(p, p.transpose());
    }

    #[test]
    fn random_symmetric_system_has_exact_witness() {
        let sigma = SignatureMatrix::new(vec![-1, -1, 1, 1]).unwrap();
        for seed in 0..20 {
            let ss = random_symmetric_system(2, 2, &sigma, seed).unwrap();
            let p = system_matrix(&ss).p;
            let s = sigma.to_matrix();
            assert_eq!(&s * &p, p.transpose() * &s);
        }
    }

    #[test]
    fn sample_points_avoid_poles() {
        let ss = siso(0.0, 1.0, 1.0, 0.0);
        let pts = sample_points(&ss);
        assert!(pts.len() >= 20);
        assert!(pts.iter().all(|s| s.norm() >= POLE_CLEARANCE));
        // deterministic
        assert_eq!(pts, sample_points(&ss));
    }
}
