//! Prüfer phase/amplitude variables for `-h^2 y'' + V y = mu y`, zero
//! counting, and the large-`m` expansion of the angular eigenvalues.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::angular::{AngularLevel, Method, Parity};
use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::numerics::{bs, roots};

const RTOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PruferState {
    pub theta: f64,
    pub rho: f64,
    pub x: f64,
}

impl PruferState {
    /// State of a solution with value `y` and slope `dy` at `x`, in the
    /// variables scaled by `q = (mu - V)/h^2 > 0`. `theta` lies in `[0, pi)`
    /// for `y > 0`.
    pub fn from_solution(x: f64, y: f64, dy: f64, q: f64) -> Result<Self> {
        if !(q > 0.0) {
            return Err(Error::Precondition(format!("q = {q} must be positive")));
        }
        let s = q.powf(0.25);
        let (a, b) = (y * s, dy / s);
        let rho = a.hypot(b);
        if rho == 0.0 {
            return Err(Error::Precondition("trivial solution".into()));
        }
        let mut theta = a.atan2(b);
        if theta < 0.0 {
            theta += PI;
        }
        Ok(PruferState { theta, rho, x })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
}

impl AsymptoticCoefficients {
    /// Coefficients of `sqrt(mu) = M + a1/M + a2/M^2 + a3/M^3 + ...`,
    /// `M = (m+1) h`, for `V = E cos^2 + Z- cos` on `[-pi, pi]`.
    pub fn for_potential(e: f64, z_minus: f64) -> Self {
        AsymptoticCoefficients {
            a1: e / 4.0,
            a2: 0.0,
            a3: (z_minus * z_minus - e * e / 4.0) / 16.0,
        }
    }

    pub fn sqrt_mu(&self, big_m: f64) -> f64 {
        big_m + self.a1 / big_m + self.a2 / big_m.powi(2) + self.a3 / big_m.powi(3)
    }
}

/// The angular potential `E cos^2 x + Z- cos x` and its derivative.
pub fn hill_potential(e: f64, z_minus: f64) -> impl Fn(f64) -> (f64, f64) + Copy {
    move |x: f64| {
        let (s, c) = x.sin_cos();
        (e * c * c + z_minus * c, -2.0 * e * s * c - z_minus * s)
    }
}

fn sampled_max<P: Fn(f64) -> (f64, f64)>(v: &P, a: f64, b: f64) -> f64 {
    (0..=2048)
        .map(|i| v(a + (b - a) * i as f64 / 2048.0).0)
        .fold(f64::NEG_INFINITY, f64::max)
}

fn sampled_min<P: Fn(f64) -> (f64, f64)>(v: &P, a: f64, b: f64) -> f64 {
    (0..=2048)
        .map(|i| v(a + (b - a) * i as f64 / 2048.0).0)
        .fold(f64::INFINITY, f64::min)
}

/// Integrates the modified Prüfer equations
/// `theta' = sqrt(mu - V)/h - V' sin(2 theta) / (4 (mu - V))`,
/// `(ln rho)' = V' cos(2 theta) / (4 (mu - V))` across `interval`.
pub fn prufer_advance<P: Fn(f64) -> (f64, f64)>(
    potential: P,
    h: f64,
    mu: f64,
    interval: (f64, f64),
    anchor: PruferState,
) -> Result<PruferState> {
    let (a, b) = interval;
    if !(h > 0.0) {
        return Err(Error::Precondition(format!("h = {h} must be positive")));
    }
    let vmax = sampled_max(&potential, a.min(b), a.max(b));
    if !(mu > vmax) {
        return Err(Error::Precondition(format!("mu = {mu} does not exceed max V = {vmax}")));
    }
    let rhs = |x: f64, y: &[f64; 2]| {
        let (v, dv) = potential(x);
        let g = dv / (4.0 * (mu - v));
        let (s2, c2) = (2.0 * y[0]).sin_cos();
        [(mu - v).sqrt() / h - g * s2, g * c2]
    };
    let step = h / (mu - vmax).sqrt();
    let out = bs::integrate(rhs, a, [anchor.theta, anchor.rho.ln()], b, RTOL, 1e-14, step, |_, _| {})
        .map_err(Error::Numerical)?;
    Ok(PruferState { theta: out[0], rho: out[1].exp(), x: b })
}

/// Number of zeros in `(a0, a1]` between two states of one integration.
pub fn zero_count(start: &PruferState, end: &PruferState) -> i64 {
    let count = |t: f64| {
        let r = t / PI;
        (r + 1e-10 * r.abs().max(1.0)).floor() as i64
    };
    count(end.theta) - count(start.theta)
}

/// Phase gained across `[-pi, pi]` starting from `theta = 0`.
pub fn phase_gain(params: &ProblemParams, e: f64, mu: f64) -> Result<f64> {
    let start = PruferState { theta: 0.0, rho: 1.0, x: -PI };
    let end = prufer_advance(hill_potential(e, params.z_minus), params.h, mu, (-PI, PI), start)?;
    Ok(end.theta - start.theta)
}

fn pair_error(params: &ProblemParams, m: usize) -> f64 {
    let big_m = (m + 1) as f64 * params.h;
    big_m.powi(-4) + ((m + 1) as f64).powi(-2)
}

/// Phase-quantised value shared asymptotically by `mu_{2m+1}` and
/// `mu_{2m+2}`: the root of `theta(pi) - theta(-pi) = 2 (m+1) pi`.
pub fn shooting_eigenvalue(params: &ProblemParams, e: f64, m: usize) -> Result<AngularLevel> {
    let target = 2.0 * (m + 1) as f64 * PI;
    let vmax = sampled_max(&hill_potential(e, params.z_minus), -PI, PI);
    let floor = vmax + 1e-9 * vmax.abs().max(1.0);
    let big_m = (m + 1) as f64 * params.h;
    let pred = big_m * big_m + e / 2.0 + (params.z_minus.powi(2) + e * e / 4.0) / (8.0 * big_m * big_m);
    let err = pair_error(params, m);
    let g = |mu: f64| phase_gain(params, e, mu).map(|t| t - target);

    let cap = pred.abs() * 1e3 + 1e6;
    let mut lo = (pred - 4.0 * err).max(floor);
    let mut hi = (pred + 4.0 * err).max(lo + 4.0 * err);
    let mut width = hi - lo;
    while g(lo)? > 0.0 {
        if lo <= floor {
            return Err(Error::Numerical(format!(
                "no phase-quantised root for m = {m} above max V = {vmax}"
            )));
        }
        hi = lo;
        width *= 2.0;
        lo = (lo - width).max(floor);
    }
    while g(hi)? < 0.0 {
        lo = hi;
        width *= 2.0;
        hi += width;
        if hi > cap {
            return Err(Error::Numerical(format!("no bracket below mu = {cap}")));
        }
    }
    let mut failure = None;
    let mu = roots::brent(
        |mu| match g(mu) {
            Ok(v) => v,
            Err(err) => {
                failure = Some(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14 * hi.abs().max(1.0),
        200,
    )
    .map_err(Error::Numerical)?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(level(params, e, m, mu, Method::Shooting, err))
}

fn level(params: &ProblemParams, e: f64, m: usize, mu: f64, method: Method, err: f64) -> AngularLevel {
    let parity = if (m + 1) % 2 == 1 { Parity::OddSym } else { Parity::OddAntisym };
    AngularLevel {
        index: 2 * m + 1,
        mu: Complex64::new(mu, 0.0),
        parity,
        method,
        err_estimate: err,
        block: None,
        block_index: None,
        coefficients: None,
        continuation_guaranteed: e > 2.0 * params.z_minus.abs(),
    }
}

/// Three-term large-`m` expansion of the level pair `mu_{2m+1}, mu_{2m+2}`.
pub fn high_energy_mu(params: &ProblemParams, e: f64, m: usize) -> Result<AngularLevel> {
    let big_m = (m + 1) as f64 * params.h;
    if big_m < 0.5 {
        return Err(Error::Precondition(format!("(m+1) h = {big_m} < 0.5")));
    }
    let mu = big_m * big_m + e / 2.0 + (params.z_minus.powi(2) + e * e / 4.0) / (8.0 * big_m * big_m);
    Ok(level(params, e, m, mu, Method::HighEnergy, pair_error(params, m)))
}

/// Even (`y'(0) = y'(pi) = 0`) or odd (`y(0) = y(pi) = 0`) periodic
/// eigenvalue number `j` of the angular operator, by shooting on `[0, pi]`.
///
/// Uses the constant-scale phase `y = r sin(t)/sqrt(s)`, `y' = r sqrt(s) cos(t)`,
/// which is valid on both sides of the turning points.
pub fn parity_eigenvalue(params: &ProblemParams, e: f64, even: bool, j: usize) -> Result<f64> {
    let pot = hill_potential(e, params.z_minus);
    let h2 = params.h * params.h;
    let (vmin, vmax) = (sampled_min(&pot, 0.0, PI), sampled_max(&pot, 0.0, PI));
    let (t0, target) = if even {
        (PI / 2.0, PI / 2.0 + j as f64 * PI)
    } else {
        (0.0, (j + 1) as f64 * PI)
    };
    let phase = |mu: f64| -> Result<f64> {
        let s = ((mu - vmin).abs() / h2).sqrt().max(1.0);
        let rhs = |x: f64, y: &[f64; 1]| {
            let q = (mu - pot(x).0) / h2;
            let (sn, cs) = y[0].sin_cos();
            [s * cs * cs + q / s * sn * sn]
        };
        let out = bs::integrate(rhs, 0.0, [t0], PI, RTOL, 1e-14, 0.5 / s, |_, _| {})
            .map_err(Error::Numerical)?;
        Ok(out[0] - target)
    };
    let lo = vmin - 1e-9;
    let hi = vmax + h2 * ((j + 1) * (j + 1)) as f64 + 1.0;
    let mut failure = None;
    let mu = roots::brent(
        |mu| match phase(mu) {
            Ok(v) => v,
            Err(err) => {
                failure = Some(err);
                f64::NAN
            }
        },
        lo,
        hi,
        1e-14 * hi.abs().max(1.0),
        300,
    )
    .map_err(Error::Numerical)?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(mu)
}

/// Least-squares fit of `sqrt(mu) - M` against `M^-1 .. M^-order`.
pub fn fit_inverse_powers(samples: &[(f64, f64)], order: usize) -> Result<Vec<f64>> {
    if samples.len() < order || order == 0 {
        return Err(Error::Precondition(format!(
            "{} samples cannot fit {order} coefficients",
            samples.len()
        )));
    }
    let a = DMatrix::from_fn(samples.len(), order, |i, j| samples[i].0.powi(-(j as i32 + 1)));
    let b = DVector::from_iterator(samples.len(), samples.iter().map(|&(m, s)| s - m));
    let svd = a.svd(true, true);
    let x = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::Numerical(e.to_string()))?;
    Ok(x.iter().copied().collect())
}
