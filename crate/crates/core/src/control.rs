//! Relaxation-type checks, the closed-form static output-feedback
//! controller and a fixed-step closed-loop simulator.

use nalgebra::{Cholesky, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::statespace::{apply_io_transform, rows_of, system_matrix, StateSpace};
use crate::symmetrizability::complete_symmetrizability;

/// Relative tolerance of the relaxation-type test.
pub const RELAXATION_TOL: f64 = 1e-8;
/// The closed loop counts as Hurwitz when `max Re(lambda) < -HURWITZ_TOL * rho`.
pub const HURWITZ_TOL: f64 = 1e-9;

/// `u = gain * y` together with the weights it is optimal for.
#[derive(Debug, Clone)]
pub struct ControllerResult {
    pub gain: Mat,
    pub alpha: f64,
    /// Output weight `K^-2`.
    pub r: Mat,
    /// Disturbance weight `T^-2`.
    pub s: Mat,
    /// The controller in symmetrized coordinates.
    pub symmetrized_gain: Mat,
    /// `|K K_s K^-1 - gain| / |gain|`.
    pub path_error: f64,
}

#[derive(Serialize)]
struct ControllerDoc {
    gain: Vec<Vec<f64>>,
    alpha: f64,
    #[serde(rename = "R")]
    r: Vec<Vec<f64>>,
    #[serde(rename = "S")]
    s: Vec<Vec<f64>>,
    symmetrized_gain: Vec<Vec<f64>>,
    path_error: f64,
}

impl ControllerResult {
    pub fn to_json(&self) -> String {
        let doc = ControllerDoc {
            gain: rows_of(&self.gain),
            alpha: self.alpha,
            r: rows_of(&self.r),
            s: rows_of(&self.s),
            symmetrized_gain: rows_of(&self.symmetrized_gain),
            path_error: self.path_error,
        };
        serde_json::to_string_pretty(&doc).expect("controller serializes")
    }
}

fn sym_extreme(m: &Mat, largest: bool) -> f64 {
    let e = linalg::sym_eig(m).eigenvalues;
    if largest {
        e.max()
    } else {
        e.min()
    }
}

fn max_real_eig(m: &Mat) -> f64 {
    m.complex_eigenvalues().iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max)
}

/// Square roots `(T, K)` of the diagonal blocks of a positive definite `Q`.
fn block_roots(q: &Mat, n: usize, m: usize) -> Result<(Mat, Mat)> {
    if q.shape() != (n + m, n + m) {
        return Err(Error::Dimension(format!("Q must be {0}x{0}", n + m)));
    }
    if Cholesky::new(linalg::symmetrize_part(q)).is_none() {
        return Err(Error::NotPositiveDefinite);
    }
    let t = linalg::spd_sqrt(&q.view((0, 0), (n, n)).into_owned()).ok_or(Error::NotPositiveDefinite)?;
    let k = linalg::spd_sqrt(&q.view((n, n), (m, m)).into_owned()).ok_or(Error::NotPositiveDefinite)?;
    Ok((t, k))
}

/// Whether `ss` is a relaxation system in the coordinates given by `q`.
///
/// With `T = Q11^(1/2)` and `K = Q22^(1/2)` this checks `A^T T^-2 = T^-2 A`,
/// `T^-2 A <= 0`, `(K^-1 C)^T = T^-2 B K`, `K^-1 D K >= 0` and that `A` and
/// `-D` have no eigenvalues in the open right half-plane.
pub fn relaxation_check(ss: &StateSpace, q: &Mat) -> Result<bool> {
    let (t, k) = block_roots(q, ss.n(), ss.m())?;
    let ti = linalg::inverse(&t).ok_or(Error::NotPositiveDefinite)?;
    let ki = linalg::inverse(&k).ok_or(Error::NotPositiveDefinite)?;
    let t2 = &ti * &ti;
    let scale = |m: &Mat| linalg::max_abs(m).max(f64::MIN_POSITIVE);

    let ta = &t2 * ss.a();
    let a_sym = linalg::max_abs(&(ss.a().transpose() * &t2 - &ta)) <= RELAXATION_TOL * scale(&ta);
    let a_neg = sym_extreme(&ta, true) <= RELAXATION_TOL * scale(&ta);
    let kc = &ki * ss.c();
    let tbk = &t2 * ss.b() * &k;
    let io = linalg::max_abs(&(kc.transpose() - &tbk)) <= RELAXATION_TOL * scale(&tbk).max(scale(&kc));
    let kdk = &ki * ss.d() * &k;
    let d_pos = sym_extreme(&kdk, false) >= -RELAXATION_TOL * scale(&kdk).max(1.0);
    let rho = scale(&system_matrix(ss).p);
    let poles = max_real_eig(ss.a()) <= RELAXATION_TOL * rho;
    let neg_d = max_real_eig(&-ss.d()) <= RELAXATION_TOL * rho;
    Ok(a_sym && a_neg && io && d_pos && poles && neg_d)
}

fn closed_form(ss: &StateSpace, alpha: f64) -> Result<Mat> {
    if linalg::is_singular(ss.a(), 1e-12) {
        return Err(Error::SingularA);
    }
    let ai = linalg::inverse(ss.a()).ok_or(Error::SingularA)?;
    Ok(-(ss.d() - ss.c() * ai * ss.b()) / alpha)
}

/// `u = -alpha^-1 (D - C A^-1 B) y` for a completely symmetrizable
/// relaxation system.
pub fn optimal_controller(ss: &StateSpace, alpha: f64) -> Result<ControllerResult> {
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(Error::Value(format!("alpha must be positive, got {alpha}")));
    }
    let p = system_matrix(ss);
    let q = match complete_symmetrizability(&p) {
        Ok(sol) => sol.q,
        Err(Error::NotCompletelySymmetrizable) => {
            return Err(Error::PreconditionFailed("system is not completely symmetrizable".into()))
        }
        Err(e) => return Err(e),
    };
    if !relaxation_check(ss, &q)? {
        return Err(Error::PreconditionFailed("system is not of relaxation type".into()));
    }
    let gain = closed_form(ss, alpha)?;
    let (t, k) = block_roots(&q, ss.n(), ss.m())?;
    let ki = linalg::inverse(&k).ok_or(Error::NotPositiveDefinite)?;
    let ti = linalg::inverse(&t).ok_or(Error::NotPositiveDefinite)?;
    let sym = apply_io_transform(ss, &k, &t)?;
    let symmetrized_gain = closed_form(&sym, alpha)?;
    let back = &k * &symmetrized_gain * &ki;
    let path_error = linalg::max_abs(&(&back - &gain)) / linalg::max_abs(&gain).max(f64::MIN_POSITIVE);
    Ok(ControllerResult {
        r: &ki * &ki,
        s: &ti * &ti,
        gain,
        alpha,
        symmetrized_gain,
        path_error,
    })
}

/// `A + B (I - F D)^-1 F C`, the state matrix under `u = F y`.
pub fn closed_loop_matrix(ss: &StateSpace, gain: &Mat) -> Result<Mat> {
    let m = ss.m();
    if gain.shape() != (m, m) {
        return Err(Error::Dimension(format!("gain must be {m}x{m}")));
    }
    let loop_ = Mat::identity(m, m) - gain * ss.d();
    if linalg::is_singular(&loop_, 1e-12) {
        return Err(Error::IllPosedLoop);
    }
    let li = linalg::inverse(&loop_).ok_or(Error::IllPosedLoop)?;
    Ok(ss.a() + ss.b() * li * gain * ss.c())
}

/// Whether every eigenvalue of `a` is strictly in the left half-plane.
pub fn is_hurwitz(a: &Mat) -> bool {
    let eig = a.complex_eigenvalues();
    let rho = eig.iter().map(|l| l.norm()).fold(0.0_f64, f64::max);
    eig.iter().all(|l| l.re < -HURWITZ_TOL * rho)
}

/// Additive state disturbance `w(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Disturbance {
    Zero,
    /// `amplitude` on `[0, width)`, zero afterwards.
    Pulse { amplitude: DVector<f64>, width: f64 },
    /// `amplitude * sin(omega t)`.
    Sine { amplitude: DVector<f64>, omega: f64 },
}

impl Disturbance {
    pub fn at(&self, t: f64, n: usize) -> DVector<f64> {
        match self {
            Disturbance::Zero => DVector::zeros(n),
            Disturbance::Pulse { amplitude, width } => {
                if (0.0..*width).contains(&t) {
                    amplitude.clone()
                } else {
                    DVector::zeros(n)
                }
            }
            Disturbance::Sine { amplitude, omega } => amplitude * (omega * t).sin(),
        }
    }

    fn dim(&self) -> Option<usize> {
        match self {
            Disturbance::Zero => None,
            Disturbance::Pulse { amplitude, .. } | Disturbance::Sine { amplitude, .. } => Some(amplitude.len()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SimOptions {
    pub horizon: f64,
    /// Step size; `None` picks `1e-3` of the fastest closed-loop time constant.
    pub dt: Option<f64>,
    pub x0: Option<DVector<f64>>,
    /// Effort weight in the cost.
    pub alpha: f64,
    /// Output weight `R`; identity when `None`.
    pub weight: Option<Mat>,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            horizon: 10.0,
            dt: None,
            x0: None,
            alpha: 1.0,
            weight: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub t: Vec<f64>,
    pub x: Vec<DVector<f64>>,
    pub y: Vec<DVector<f64>>,
    pub u: Vec<DVector<f64>>,
    /// Trapezoidal value of `int y^T R y + alpha^2 u^T R u dt`.
    pub cost: f64,
    /// Set when the closed loop is not Hurwitz.
    pub warning: Option<String>,
}

impl Simulation {
    pub fn to_csv(&self) -> String {
        let (n, m) = (
            self.x.first().map_or(0, |v| v.len()),
            self.y.first().map_or(0, |v| v.len()),
        );
        let mut header = vec!["t".to_string()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=m).map(|i| format!("y{i}")));
        header.extend((1..=m).map(|i| format!("u{i}")));
        let mut out = header.join(",");
        out.push('\n');
        for (k, t) in self.t.iter().enumerate() {
            let row: Vec<String> = std::iter::once(*t)
                .chain(self.x[k].iter().copied())
                .chain(self.y[k].iter().copied())
                .chain(self.u[k].iter().copied())
                .map(|v| v.to_string())
                .collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out.push_str(&format!("cost,{}\n", self.cost));
        out
    }
}

/// Integrates `x' = A x + B u + w` with `u = F y` by classical RK4.
pub fn simulate_closed_loop(ss: &StateSpace, gain: &Mat, w: &Disturbance, opts: &SimOptions) -> Result<Simulation> {
    let (n, m) = (ss.n(), ss.m());
    let acl = closed_loop_matrix(ss, gain)?;
    if let Some(d) = w.dim() {
        if d != n {
            return Err(Error::Dimension(format!("disturbance must have {n} entries")));
        }
    }
    if !(opts.horizon.is_finite() && opts.horizon > 0.0) {
        return Err(Error::Value("horizon must be positive".into()));
    }
    if !(opts.alpha.is_finite() && opts.alpha > 0.0) {
        return Err(Error::Value("alpha must be positive".into()));
    }
    let r = opts.weight.clone().unwrap_or_else(|| Mat::identity(m, m));
    if r.shape() != (m, m) {
        return Err(Error::Dimension(format!("weight must be {m}x{m}")));
    }
    let x0 = opts.x0.clone().unwrap_or_else(|| DVector::zeros(n));
    if x0.len() != n {
        return Err(Error::Dimension(format!("x0 must have {n} entries")));
    }
    let dt = match opts.dt {
        Some(dt) if dt.is_finite() && dt > 0.0 => dt,
        Some(dt) => return Err(Error::Value(format!("dt must be positive, got {dt}"))),
        None => {
            let fastest = acl.complex_eigenvalues().iter().map(|l| l.norm()).fold(0.0_f64, f64::max);
            if fastest > 0.0 {
                1e-3 / fastest
            } else {
                1e-3 * opts.horizon
            }
        }
    };
    let warning = (!is_hurwitz(&acl)).then(|| "closed loop is not Hurwitz".to_string());

    // y = (I - D F)^-1 C x, u = F y.
    let out_map = linalg::inverse(&(Mat::identity(m, m) - ss.d() * gain)).ok_or(Error::IllPosedLoop)? * ss.c();
    let f = |t: f64, x: &DVector<f64>| &acl * x + w.at(t, n);
    let steps = (opts.horizon / dt).ceil() as usize;
    let h = opts.horizon / steps as f64;
    let mut sim = Simulation {
        t: Vec::with_capacity(steps + 1),
        x: Vec::with_capacity(steps + 1),
        y: Vec::with_capacity(steps + 1),
        u: Vec::with_capacity(steps + 1),
        cost: 0.0,
        warning,
    };
    let a2 = opts.alpha * opts.alpha;
    let running = |y: &DVector<f64>, u: &DVector<f64>| (y.transpose() * &r * y)[0] + a2 * (u.transpose() * &r * u)[0];
    let mut x = x0;
    let mut prev = 0.0;
    for k in 0..=steps {
        let t = k as f64 * h;
        let y = &out_map * &x;
        let u = gain * &y;
        let l = running(&y, &u);
        if k > 0 {
            sim.cost += 0.5 * h * (prev + l);
        }
        prev = l;
        sim.t.push(t);
        sim.x.push(x.clone());
        sim.y.push(y);
        sim.u.push(u);
        if k < steps {
            let k1 = f(t, &x);
            let k2 = f(t + h / 2.0, &(&x + &k1 * (h / 2.0)));
            let k3 = f(t + h / 2.0, &(&x + &k2 * (h / 2.0)));
            let k4 = f(t + h, &(&x + &k3 * h));
            x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        }
    }
    Ok(sim)
}
