#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use symmetrize_core::linalg::{self, Mat};
use symmetrize_core::statespace::sample_points;
use symmetrize_core::{apply_io_transform, transfer_eval, StateSpace};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat {
    DMatrix::from_fn(r, c, |_, _| rng.sample(StandardNormal))
}

/// Random matrix with condition number at most `max_cond`.
pub fn well_conditioned(rng: &mut ChaCha8Rng, dim: usize, max_cond: f64) -> Mat {
    loop {
        let m = gaussian(rng, dim, dim);
        let (lo, hi) = linalg::sv_extremes(&m);
        if lo * max_cond >= hi {
            return m;
        }
    }
}

/// `(ss transformed by random K0, T0, K0, T0)`.
pub fn conjugate(ss: &StateSpace, rng: &mut ChaCha8Rng) -> (StateSpace, Mat, Mat) {
    let k0 = well_conditioned(rng, ss.m(), 20.0);
    let t0 = well_conditioned(rng, ss.n(), 20.0);
    (apply_io_transform(ss, &k0, &t0).unwrap(), k0, t0)
}

/// Largest relative deviation of `H(s)` from `Sigma_e H(s)^T Sigma_e` over
/// the standard sample set, evaluated straight from the realization.
pub fn external_asymmetry(ss: &StateSpace, sigma_e: &[i8]) -> f64 {
    let s_e = DMatrix::from_fn(sigma_e.len(), sigma_e.len(), |i, j| {
        if i == j {
            Complex64::new(f64::from(sigma_e[i]), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    sample_points(ss)
        .into_iter()
        .map(|s| {
            let h = transfer_eval(ss, s).unwrap();
            let scale = linalg::cmax_abs(&h).max(1e-300);
            linalg::cmax_abs(&(&s_e * h.transpose() - &h * &s_e)) / scale
        })
        .fold(0.0, f64::max)
}

/// Largest relative deviation of `transfer(b)` from `K^-1 transfer(a) K`.
pub fn conjugation_error(a: &StateSpace, b: &StateSpace, k: &Mat) -> f64 {
    let kc = linalg::to_complex(k);
    let ki = linalg::to_complex(&linalg::inverse(k).unwrap());
    sample_points(a)
        .into_iter()
        .map(|s| {
            let ga = transfer_eval(a, s).unwrap();
            let gb = transfer_eval(b, s).unwrap();
            let want = &ki * ga * &kc;
            linalg::cmax_abs(&(gb - &want)) / linalg::cmax_abs(&want).max(1e-300)
        })
        .fold(0.0, f64::max)
}
