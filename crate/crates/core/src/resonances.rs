//! Barrier-top resonance equations and the direct search for zeros of the
//! Jost function.
//!
//! Every regime solves `A_n(E, mu(E)) = 0` for a regime-specific angular
//! eigenvalue `mu(E)`, where
//! `A_n = -Z+ - k^2 + mu - i h (2n+1) omega` and
//! `omega = sqrt(mu + 5h^2/4 - Z+/2)`. Flipping the sign of the `i` term
//! gives the anti-resonance equation, whose roots are the complex
//! conjugates of the resonances.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::angular::angular_level;
use crate::error::{Error, Result};
use crate::model::{energy_from_k, ComplexEnergy, ProblemParams, Regime, ResonanceRecord, ZeroKind};
use crate::radial::jost_plus;

const MAX_ITER: usize = 100;
const TOL: f64 = 1e-12;
/// Smallest `(m+1) h` accepted by the high-energy equation.
pub const C_MIN: f64 = 0.5;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Which half-plane the equation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Outgoing boundary condition, `Im E < 0`.
    Resonance,
    /// Incoming boundary condition, `Im E > 0`.
    Anti,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Resonance => 1.0,
            Side::Anti => -1.0,
        }
    }
}

/// The two real solutions of the leading-order balance: small and large
/// real part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Small,
    Large,
}

/// Local harmonic model of the radial barrier at `xi = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierTopModel {
    /// `A = -Z+ - k^2 + mu - h^2/2`.
    pub a_offset: Complex64,
    /// `omega = sqrt(mu + 5h^2/4 - Z+/2)`.
    pub omega: Complex64,
    pub n: usize,
}

impl BarrierTopModel {
    pub fn new(params: &ProblemParams, n: usize, k: Complex64, mu: Complex64) -> Result<Self> {
        let h2 = params.h * params.h;
        let w2 = mu + 1.25 * h2 - 0.5 * params.z_plus;
        if !(w2.re > 0.0) {
            return Err(Error::BranchCut(format!(
                "Re(mu + 5h^2/4 - Z+/2) = {:.6e} <= 0 at mu = {mu}",
                w2.re
            )));
        }
        Ok(BarrierTopModel {
            a_offset: -params.z_plus - k * k + mu - 0.5 * h2,
            omega: w2.sqrt(),
            n,
        })
    }

    /// Transformed potential of the harmonic model,
    /// `A + omega^2 y^2 + O(y^3)` in the scaled variable `y`.
    pub fn potential(&self, y: Complex64) -> Complex64 {
        self.a_offset + self.omega * self.omega * y * y
    }

    /// `A_n` on the chosen side.
    pub fn a_n(&self, h: f64, side: Side) -> Complex64 {
        self.a_offset + 0.5 * h * h - side.sign() * I * h * (2 * self.n + 1) as f64 * self.omega
    }
}

/// `A_n(h, k^2, Z+, mu)`; its zeros are the barrier-top resonances.
pub fn barrier_top_an(params: &ProblemParams, n: usize, k: Complex64, mu: Complex64) -> Result<Complex64> {
    Ok(BarrierTopModel::new(params, n, k, mu)?.a_n(params.h, Side::Resonance))
}

/// `A_n` in terms of `E`; the implicit solvers continue `omega` by the
/// principal square root beyond the barrier-top region.
fn a_n_energy(params: &ProblemParams, n: usize, e: Complex64, mu: Complex64, side: Side) -> Complex64 {
    let w2 = mu + 1.25 * params.h * params.h - 0.5 * params.z_plus;
    -params.z_plus - e + mu - side.sign() * I * params.h * (2 * n + 1) as f64 * w2.sqrt()
}

/// First rough estimate of `E` from `mu` for `Re mu >> 0`: real part
/// `Re mu - Z+`, imaginary part `Im mu -+ (2n+1) h sqrt(Re mu)` for the
/// equation of sign `side`.
pub fn rough_estimate(params: &ProblemParams, n: usize, mu: Complex64, side: Side) -> Complex64 {
    Complex64::new(
        mu.re - params.z_plus,
        mu.im - side.sign() * (2 * n + 1) as f64 * params.h * mu.re.max(0.0).sqrt(),
    )
}

/// Left-hand side of the equal-charges equation in the labelling used by
/// the equation itself,
/// `k^2 + Z+ - (2a+1) k h + i h (2b+1) sqrt((2a+1) k h + 5h^2/4 - Z+/2)`.
/// Here `a` labels the angular level and `b` the barrier mode, so the
/// resonance `(n, m)` is obtained with `a = m`, `b = n`.
pub fn equal_charges_lhs(params: &ProblemParams, a: usize, b: usize, k: Complex64, side: Side) -> Complex64 {
    let h = params.h;
    let ta = (2 * a + 1) as f64;
    let tb = (2 * b + 1) as f64;
    let root = (ta * k * h + 1.25 * h * h - 0.5 * params.z_plus).sqrt();
    k * k + params.z_plus - ta * k * h + side.sign() * I * h * tb * root
}

/// Angular eigenvalue model of the low-lying regime, with the well shape
/// frozen to `pi_well`.
pub fn low_lying_mu(params: &ProblemParams, m: usize, e: Complex64, pi_well: bool) -> Complex64 {
    let zm = params.z_minus;
    let th = (2 * m + 1) as f64 * params.h;
    if pi_well {
        e - zm + (0.5 * zm - e).sqrt() * th
    } else {
        let a = -zm * zm / (4.0 * e);
        a + (e + a).sqrt() * th
    }
}

/// `mu_{2m+1}` of the high-energy expansion,
/// `(m+1)^2 h^2 + E/2 + (Z-^2 + E^2/4) / (8 (m+1)^2 h^2)`.
pub fn high_energy_mu_model(params: &ProblemParams, m: usize, e: Complex64) -> Complex64 {
    let mh2 = ((m + 1) as f64 * params.h).powi(2);
    mh2 + 0.5 * e + (params.z_minus * params.z_minus + 0.25 * e * e) / (8.0 * mh2)
}

/// Damped Newton iteration with central-difference derivatives. Returns
/// the root and `|F|` there.
fn newton<F>(f: F, x0: Complex64, step_rel: f64, tol: impl Fn(Complex64) -> f64) -> Result<(Complex64, f64)>
where
    F: Fn(Complex64) -> Result<Complex64>,
{
    let mut x = x0;
    let mut fx = f(x)?;
    for _ in 0..MAX_ITER {
        if fx.norm() < tol(x) {
            return Ok((x, fx.norm()));
        }
        let d = step_rel * x.norm().max(1e-3);
        let df = (f(x + d)? - f(x - d)?) / (2.0 * d);
        if df.norm() == 0.0 || !df.re.is_finite() || !df.im.is_finite() {
            return Err(Error::Numerical(format!("vanishing derivative at {x}")));
        }
        let dx = fx / df;
        let mut lambda = 1.0;
        let mut accepted = None;
        let mut last_err = None;
        for _ in 0..40 {
            let trial = x - dx * lambda;
            match f(trial) {
                Ok(ft) if ft.norm() < fx.norm() => {
                    accepted = Some((trial, ft));
                    break;
                }
                Ok(_) => {}
                Err(e) => last_err = Some(e),
            }
            lambda *= 0.5;
        }
        match accepted {
            Some((t, ft)) => {
                x = t;
                fx = ft;
            }
            None => {
                return Err(last_err.unwrap_or(Error::NoConvergence { iterations: MAX_ITER, residual: fx.norm() }));
            }
        }
    }
    if fx.norm() < tol(x) {
        return Ok((x, fx.norm()));
    }
    Err(Error::NoConvergence { iterations: MAX_ITER, residual: fx.norm() })
}

fn side_ok(e: Complex64, side: Side) -> bool {
    match side {
        Side::Resonance => e.im <= 0.0,
        Side::Anti => e.im >= 0.0,
    }
}

fn kind_for(side: Side) -> ZeroKind {
    match side {
        Side::Resonance => ZeroKind::Resonance,
        Side::Anti => ZeroKind::AntiResonance,
    }
}

fn conj_if(z: Complex64, side: Side) -> Complex64 {
    match side {
        Side::Resonance => z,
        Side::Anti => z.conj(),
    }
}

/// Momentum for a root energy: `Re k >= 0`, `Im k` with the sign of `Im E`.
fn k_of(e: Complex64) -> Complex64 {
    let mut k = e.sqrt();
    if k.re < 0.0 {
        k = -k;
    }
    k
}

fn record(
    n: usize,
    m: usize,
    e: Complex64,
    mu: Complex64,
    regime: Regime,
    residual: f64,
    side: Side,
) -> Result<ResonanceRecord> {
    let energy = energy_from_k(k_of(e), false)?;
    Ok(ResonanceRecord {
        n,
        m,
        energy: ComplexEnergy { e, ..energy },
        mu,
        k_classical: -mu.re,
        regime,
        residual,
        kind: kind_for(side),
    })
}

/// Solver settings shared by the implicit equations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub branch: Branch,
    pub side: Side,
    /// Lower bound on `(m+1) h` for the high-energy equation.
    pub c_min: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { branch: Branch::Large, side: Side::Resonance, c_min: C_MIN }
    }
}

fn flip(side: Side) -> Side {
    match side {
        Side::Resonance => Side::Anti,
        Side::Anti => Side::Resonance,
    }
}

/// Runs Newton on the equation of sign `side` from `guess`. A root in the
/// wrong half-plane belongs to the other sign of `omega`; the search is
/// then repeated on the flipped equation from the conjugated guess.
/// Returns the root, `|F|` and the sign of the equation it solves.
fn solve_sided<F>(
    f: F,
    guess: Complex64,
    side: Side,
    step_rel: f64,
    tol: impl Fn(Complex64) -> f64 + Copy,
    to_energy: impl Fn(Complex64) -> Complex64,
) -> Result<(Complex64, f64, Side)>
where
    F: Fn(Complex64, Side) -> Result<Complex64>,
{
    let first = newton(|x| f(x, side), guess, step_rel, tol);
    if let Ok((x, r)) = first {
        if side_ok(to_energy(x), side) {
            return Ok((x, r, side));
        }
    }
    let other = flip(side);
    let (x, r) = newton(|x| f(x, other), guess.conj(), step_rel, tol)?;
    if side_ok(to_energy(x), side) {
        Ok((x, r, other))
    } else {
        Err(Error::Numerical(format!(
            "no root in the target half-plane (last E = {})",
            to_energy(x)
        )))
    }
}

/// Leading-order guess for the equal-charges equation: real balance
/// `k^2 - (2m+1) h k + Z+ = 0`, then the imaginary shift of the rough
/// estimate.
pub fn equal_charges_guess(params: &ProblemParams, n: usize, m: usize, branch: Branch) -> Complex64 {
    let th = (2 * m + 1) as f64 * params.h;
    let disc = th * th - 4.0 * params.z_plus;
    let kr = if disc >= 0.0 {
        let big = 0.5 * (th + disc.sqrt());
        let small = 0.5 * (th - disc.sqrt());
        match branch {
            Branch::Small if small > 0.0 => c(small),
            _ => c(big),
        }
    } else {
        Complex64::new(0.5 * th, -0.5 * (-disc).sqrt())
    };
    let mu = th * kr;
    let e = kr * kr - I * (2 * n + 1) as f64 * params.h * mu.re.max(0.0).sqrt();
    let mut k = e.sqrt();
    if k.re < 0.0 {
        k = -k;
    }
    k
}

/// Equal charges (`Z- = 0`), unknown `k`.
pub fn solve_equal_charges(params: &ProblemParams, n: usize, m: usize) -> Result<ResonanceRecord> {
    solve_equal_charges_with(params, n, m, SolveOptions::default())
}

pub fn solve_equal_charges_with(params: &ProblemParams, n: usize, m: usize, opts: SolveOptions) -> Result<ResonanceRecord> {
    if params.z_minus != 0.0 {
        return Err(Error::Precondition(format!("equal charges need Z- = 0, got {}", params.z_minus)));
    }
    let guess = conj_if(equal_charges_guess(params, n, m, opts.branch), opts.side);
    let f = |k: Complex64, sd: Side| Ok(equal_charges_lhs(params, m, n, k, sd));
    let tol = |k: Complex64| TOL * k.norm_sqr().max(1.0);
    let (k, res, _) = solve_sided(f, guess, opts.side, 1e-6, tol, |k| k * k)?;
    let mu = (2 * m + 1) as f64 * params.h * k;
    let e = k * k;
    let energy = energy_from_k(k, false)?;
    Ok(ResonanceRecord {
        n,
        m,
        energy: ComplexEnergy { e, ..energy },
        mu,
        k_classical: -mu.re,
        regime: Regime::EqualCharges,
        residual: res,
        kind: kind_for(opts.side),
    })
}

/// `A_n` with the low-lying angular model; the well shape is fixed by
/// `pi_well` and a crossing of `Re E = Z-/2` is an error.
pub fn low_lying_lhs(params: &ProblemParams, n: usize, m: usize, e: Complex64, pi_well: bool, side: Side) -> Result<Complex64> {
    let half = 0.5 * params.z_minus;
    if params.z_minus > 0.0 && ((e.re < half) != pi_well || e.re == half) {
        return Err(Error::BranchCut(format!(
            "Re E = {} crossed Z-/2 = {half} during the low-lying iteration",
            e.re
        )));
    }
    Ok(a_n_energy(params, n, e, low_lying_mu(params, m, e, pi_well), side))
}

fn is_pi_well(params: &ProblemParams, e: Complex64) -> bool {
    params.z_minus > 0.0 && e.re < 0.5 * params.z_minus
}

/// Starting points for the low-lying equation, best first: real roots of
/// the balance `mu(E) - Z+ - E`, the equal-charges guess, then local
/// minima of `|A_n|` on a coarse grid of the lower half-plane.
fn low_lying_guesses(params: &ProblemParams, n: usize, m: usize, branch: Branch) -> Vec<Complex64> {
    let zm = params.z_minus;
    let th = (2 * m + 1) as f64 * params.h;
    let tn = (2 * n + 1) as f64 * params.h;
    let g = |e: f64| low_lying_mu(params, m, c(e), is_pi_well(params, c(e))).re - params.z_plus - e;
    let top = (th * th + params.z_plus.abs() + zm + 1.0) * 4.0;
    let mut out = Vec::new();

    let lo = if zm > 0.0 { 1e-3 * zm } else { 1e-4 };
    let samples = 4000;
    let ratio = (top / lo).powf(1.0 / samples as f64);
    let mut roots = Vec::new();
    let mut prev = (lo, g(lo));
    let mut e = lo;
    for _ in 0..samples {
        e *= ratio;
        let v = g(e);
        let crosses_well = zm > 0.0 && (prev.0 - 0.5 * zm) * (e - 0.5 * zm) <= 0.0;
        if !crosses_well && v.is_finite() && prev.1.is_finite() && v * prev.1 <= 0.0 {
            roots.push(0.5 * (e + prev.0));
        }
        prev = (e, v);
    }
    if branch == Branch::Small {
        roots.reverse();
    }
    for er in roots.into_iter().rev() {
        let mu = low_lying_mu(params, m, c(er), is_pi_well(params, c(er)));
        out.push(Complex64::new(er, -tn * mu.re.max(1e-6).sqrt()));
    }
    let k = equal_charges_guess(params, n, m, branch);
    out.push(k * k);
    // bottom of the well at pi: -Z+ - Z- + (2m+1) h sqrt(Z-/2 - E) = 0
    let s = params.z_plus + zm;
    if zm > 0.0 && s > 0.0 {
        let er = 0.5 * zm - (s / th).powi(2);
        out.push(Complex64::new(er, -tn * (er.abs()).sqrt()));
    }

    let (nx, ny) = (48, 24);
    let f = |e: Complex64| {
        low_lying_lhs(params, n, m, e, is_pi_well(params, e), Side::Resonance)
            .map(|v| v.norm())
            .unwrap_or(f64::INFINITY)
    };
    let at = |i: usize, j: usize| Complex64::new(-top + 2.0 * top * (i as f64 + 0.5) / nx as f64, -top * (j as f64 + 0.5) / ny as f64);
    let vals: Vec<Vec<f64>> = (0..nx).map(|i| (0..ny).map(|j| f(at(i, j))).collect()).collect();
    let mut minima = Vec::new();
    for i in 1..nx - 1 {
        for j in 1..ny - 1 {
            let v = vals[i][j];
            let local = (i - 1..=i + 1).all(|a| (j - 1..=j + 1).all(|b| (a, b) == (i, j) || vals[a][b] > v));
            if local && v.is_finite() {
                minima.push((v, at(i, j)));
            }
        }
    }
    minima.sort_by(|a, b| a.0.total_cmp(&b.0));
    out.extend(minima.into_iter().take(6).map(|(_, z)| z));
    out
}

/// Quasimode angular levels inserted in `A_n`, unknown `E`.
pub fn solve_low_lying(params: &ProblemParams, n: usize, m: usize) -> Result<ResonanceRecord> {
    solve_low_lying_with(params, n, m, SolveOptions::default())
}

pub fn solve_low_lying_with(params: &ProblemParams, n: usize, m: usize, opts: SolveOptions) -> Result<ResonanceRecord> {
    if params.z_minus < 0.0 {
        return Err(Error::Precondition("Z- must be non-negative".into()));
    }
    let tol = |e: Complex64| TOL * e.norm().max(1.0);
    let mut last = None;
    for guess in low_lying_guesses(params, n, m, opts.branch) {
        let guess = conj_if(guess, opts.side);
        let pi_well = is_pi_well(params, guess);
        let f = |e: Complex64, sd: Side| low_lying_lhs(params, n, m, e, pi_well, sd);
        match solve_sided(f, guess, opts.side, 1e-6, tol, |e| e) {
            Ok((e, res, _)) => {
                return record(n, m, e, low_lying_mu(params, m, e, pi_well), Regime::LowLying, res, opts.side);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.unwrap_or(Error::NoConvergence { iterations: 0, residual: f64::NAN }))
}

/// `A_n` with the high-energy expansion of `mu_{2m+1}`.
pub fn high_energy_lhs(params: &ProblemParams, n: usize, m: usize, e: Complex64, side: Side) -> Result<Complex64> {
    Ok(a_n_energy(params, n, e, high_energy_mu_model(params, m, e), side))
}

/// Real starting point: `2((m+1)^2 h^2 - Z+)` for the small branch, the
/// larger root of the real quadratic balance for the large one.
pub fn high_energy_guess(params: &ProblemParams, m: usize, branch: Branch) -> Complex64 {
    let mh2 = ((m + 1) as f64 * params.h).powi(2);
    match branch {
        Branch::Small => c(2.0 * (mh2 - params.z_plus)),
        Branch::Large => {
            // E^2 - 16 M^2 E + 32 M^2 (M^2 - Z+) + 4 Z-^2 = 0
            let b = 8.0 * mh2;
            let d = b * b - 32.0 * mh2 * (mh2 - params.z_plus) - 4.0 * params.z_minus * params.z_minus;
            c(b + d.max(0.0).sqrt())
        }
    }
}

pub fn solve_high_energy(params: &ProblemParams, n: usize, m: usize) -> Result<ResonanceRecord> {
    solve_high_energy_with(params, n, m, SolveOptions { branch: Branch::Small, ..Default::default() })
}

pub fn solve_high_energy_with(params: &ProblemParams, n: usize, m: usize, opts: SolveOptions) -> Result<ResonanceRecord> {
    let mh = (m + 1) as f64 * params.h;
    if mh < opts.c_min {
        return Err(Error::Precondition(format!("(m+1) h = {mh} is below {}", opts.c_min)));
    }
    let guess = conj_if(high_energy_guess(params, m, opts.branch), opts.side);
    // a real guess sits on the symmetry axis; nudge it into the target half-plane
    let guess = guess - opts.side.sign() * I * (2 * n + 1) as f64 * params.h * mh;
    let f = |e: Complex64, sd: Side| high_energy_lhs(params, n, m, e, sd);
    let tol = |e: Complex64| TOL * e.norm().max(1.0);
    let (e, res, _) = solve_sided(f, guess, opts.side, 1e-6, tol, |e| e)?;
    record(n, m, e, high_energy_mu_model(params, m, e), Regime::HighEnergy, res, opts.side)
}

/// `f+(k, mu_n(k^2))` with `mu_n` tracked from the real axis.
pub fn jost_on_level(params: &ProblemParams, n_angular: usize, k: Complex64) -> Result<(Complex64, Complex64)> {
    let level = angular_level(params, k * k, n_angular)?;
    Ok((jost_plus(params, k, level.mu, None)?, level.mu))
}

/// Zero of `k -> f+(k, mu_n(k^2))` near `guess`. The direct search knows
/// no barrier index, so the record has `n = 0` and `m = n_angular`;
/// `residual` is the last Newton step relative to `|k|`.
pub fn find_jost_zero(params: &ProblemParams, n_angular: usize, guess: ComplexEnergy) -> Result<ResonanceRecord> {
    let mut k = guess.k;
    let f = |k: Complex64| jost_on_level(params, n_angular, k).map(|r| r.0);
    let mut fk = f(k)?;
    let mut step_norm = f64::INFINITY;
    for _ in 0..50 {
        let d = 1e-6 * k.norm();
        let df = (f(k + d)? - f(k - d)?) / (2.0 * d);
        if df.norm() == 0.0 {
            return Err(Error::Numerical(format!("vanishing derivative of f+ at k = {k}")));
        }
        let dk = fk / df;
        let mut lambda = 1.0;
        let mut moved = false;
        for _ in 0..30 {
            let trial = k - dk * lambda;
            if let Ok(ft) = f(trial) {
                if ft.norm() < fk.norm() {
                    k = trial;
                    fk = ft;
                    moved = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        step_norm = (dk * lambda).norm() / k.norm();
        if !moved || step_norm < 1e-11 {
            break;
        }
    }
    if !(step_norm < 1e-8) {
        return Err(Error::NoConvergence { iterations: 50, residual: step_norm });
    }
    let (_, mu) = jost_on_level(params, n_angular, k)?;
    let energy = energy_from_k(k, false)?;
    Ok(ResonanceRecord {
        n: 0,
        m: n_angular,
        energy,
        mu,
        k_classical: -mu.re,
        regime: Regime::DirectJost,
        residual: step_norm,
        kind: if k.im > 0.0 { ZeroKind::Eigenvalue } else { ZeroKind::Resonance },
    })
}

/// Root of `A_n(E, mu) = 0` with `mu` the computed angular level `index`
/// at complex `E`, started from `guess`.
pub fn solve_exact_angular(params: &ProblemParams, n: usize, index: usize, guess: Complex64) -> Result<ResonanceRecord> {
    let mu_at = |e: Complex64| angular_level(params, e, index).map(|l| l.mu);
    let f = |e: Complex64, sd: Side| Ok(a_n_energy(params, n, e, mu_at(e)?, sd));
    let tol = |e: Complex64| TOL * e.norm().max(1.0);
    let (e, res, _) = solve_sided(f, guess, Side::Resonance, 1e-6, tol, |e| e)?;
    record(n, index.saturating_sub(1) / 2, e, mu_at(e)?, Regime::HighEnergy, res, Side::Resonance)
}

/// Size class of a record: `Large` when `Re E` exceeds the midpoint
/// `8 (m+1)^2 h^2` of the two real roots of the high-energy balance.
pub fn size_class(params: &ProblemParams, rec: &ResonanceRecord) -> Branch {
    let mh2 = ((rec.m + 1) as f64 * params.h).powi(2);
    if rec.energy.e.re > 8.0 * mh2 {
        Branch::Large
    } else {
        Branch::Small
    }
}

/// One grid cell: either a record or the reason it failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridCell {
    pub n: usize,
    pub m: usize,
    pub side: Side,
    pub outcome: std::result::Result<ResonanceRecord, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridOptions {
    pub branch: Branch,
    pub c_min: f64,
    /// Also solve the anti-resonance equation for every cell.
    pub keep_anti: bool,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { branch: Branch::Large, c_min: C_MIN, keep_anti: false }
    }
}

/// Solves one cell in the given regime. `DirectJost` is seeded from the
/// high-energy root and searches on angular level `2m+1`.
pub fn solve_cell(params: &ProblemParams, regime: Regime, n: usize, m: usize, opts: SolveOptions) -> Result<ResonanceRecord> {
    match regime {
        Regime::EqualCharges => solve_equal_charges_with(params, n, m, opts),
        Regime::LowLying => solve_low_lying_with(params, n, m, opts),
        Regime::HighEnergy => solve_high_energy_with(params, n, m, opts),
        Regime::DirectJost => {
            let seed = solve_high_energy_with(params, n, m, opts)?;
            let mut rec = find_jost_zero(params, 2 * m + 1, seed.energy)?;
            rec.n = n;
            rec.m = m;
            Ok(rec)
        }
    }
}

/// Independent solves over `n_range x m_range`, in `(n, m)` order.
pub fn resonance_grid(
    params: &ProblemParams,
    regime: Regime,
    n_range: std::ops::RangeInclusive<usize>,
    m_range: std::ops::RangeInclusive<usize>,
    opts: GridOptions,
) -> Vec<GridCell> {
    let mut cells = Vec::new();
    for n in n_range {
        for m in m_range.clone() {
            cells.push((n, m, Side::Resonance));
            if opts.keep_anti {
                cells.push((n, m, Side::Anti));
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(n, m, side)| GridCell {
            n,
            m,
            side,
            outcome: solve_cell(params, regime, n, m, SolveOptions { branch: opts.branch, side, c_min: opts.c_min })
                .map_err(|e| e.to_string()),
        })
        .collect()
}
