use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::phase::{PhaseForm, PhaseFunction};
use super::riccati::Radial;
use super::taylor::{chord, State};
use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::numerics::quad;

const WKB_TOL: f64 = 1e-14;
const WKB_TERMS: usize = 24;
const ANCHOR_CAP: f64 = 25.0;
const JOST_POINTS: [f64; 3] = [0.5, 1.0, 2.0];

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WaveKind {
    Outgoing,
    Incoming,
    Regular,
    Rotated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSample {
    /// `xi` for real-axis kinds, the ray coordinate `x` for `Rotated`.
    pub x: f64,
    pub value: Complex64,
    pub derivative: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveSolution {
    pub kind: WaveKind,
    pub k: Complex64,
    pub mu: Complex64,
    pub ray_angle: f64,
    /// Matching point on the ray (complex `xi`); zero for the regular wave.
    pub xi_max: Complex64,
    /// `int_{xi_max}^inf [v'/v + 1/2 -+ i phi'] dxi`; the wave equals
    /// `sqrt(2) e^{-xi/2} e^{+-i phi} exp(-tail)` at `xi_max`.
    pub tail_correction: Complex64,
    pub phase_form: Option<PhaseForm>,
    pub samples: Vec<WaveSample>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JostData {
    pub k: Complex64,
    pub mu: Complex64,
    pub f_plus: Complex64,
    pub f_minus: Complex64,
    pub s_matrix: Complex64,
    /// `|W(v+, v-) - 2 i kappa| / |2 i kappa|`, `kappa = k/h`.
    pub wronskian_check: f64,
    /// Largest relative spread of `W(v+-, v0)` over the evaluation points.
    pub consistency: f64,
    pub ray_plus: f64,
    pub ray_minus: f64,
    pub phase_form: PhaseForm,
}

pub(crate) fn radial(params: &ProblemParams, k: Complex64, mu: Complex64) -> Radial {
    let h2 = params.h * params.h;
    Radial { kappa: k / params.h, zeta: params.z_plus / h2, mu_t: mu / h2 }
}

/// Default ray angle for the wave `e^{i sigma phi}` with `sk = sigma kappa`.
pub fn default_ray_angle(sk: Complex64) -> Result<f64> {
    let a = sk.arg();
    if sk.im == 0.0 || (0.0..=PI).contains(&a) {
        return Ok(0.0);
    }
    let (alpha, sign) = if a > -FRAC_PI_2 { (a, 1.0) } else { (-PI - a, -1.0) };
    let gamma = FRAC_PI_3.min(-1.5 * alpha);
    if alpha + gamma <= 0.0 {
        return Err(Error::Precondition(format!(
            "no admissible ray angle for arg(k) = {a:.4}: rotation is capped at pi/3"
        )));
    }
    Ok(sign * gamma)
}

fn check_ray(sk: Complex64, gamma: f64) -> Result<()> {
    if gamma.abs() > FRAC_PI_2 {
        return Err(Error::Precondition(format!("ray angle {gamma} outside [-pi/2, pi/2]")));
    }
    if (sk * Complex64::from_polar(1.0, gamma)).im < -1e-14 * sk.norm() {
        return Err(Error::Precondition(format!(
            "ray angle {gamma} is not admissible for arg(k) = {:.4}",
            sk.arg()
        )));
    }
    Ok(())
}

fn ray_point(gamma: f64, s: f64) -> Complex64 {
    (c(1.0) + Complex64::from_polar(s, gamma)).ln()
}

/// Parameter `s` on the ray whose point has real part `x`.
fn ray_param(gamma: f64, x: f64) -> f64 {
    let cg = gamma.cos();
    -cg + (cg * cg - 1.0 + (2.0 * x).exp()).sqrt()
}

/// Ratio `v / (sqrt(2) e^{-xi/2} e^{i sigma phi})` of the `sigma` wave at the
/// ray point with real part `x`; tends to 1 as `x` grows.
pub fn asymptotic_ratio(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    sigma: f64,
    gamma: f64,
    x: f64,
) -> Result<Complex64> {
    let sk = k * sigma;
    let ode = radial(params, sk, mu);
    let pf = PhaseFunction::new(params, sk, mu)?;
    if x < pf.t_r {
        return Err(Error::Precondition(format!("x = {x} lies inside the phase cutoff {}", pf.t_r)));
    }
    Ok((-tail_integral(&ode, &pf, gamma, ray_param(gamma, x))?).exp())
}

/// Matching data for the wave `~ sqrt(2) e^{-xi/2} e^{i phi(xi, sk)}`.
struct Anchor {
    s: f64,
    xi: Complex64,
    log_v: Complex64,
    y: Complex64,
    tail: Complex64,
    form: PhaseForm,
}

impl Anchor {
    fn build(params: &ProblemParams, sk: Complex64, mu: Complex64, gamma: f64, min_re: Option<f64>) -> Result<Self> {
        let ode = radial(params, sk, mu);
        let pf = PhaseFunction::new(params, sk, mu)?;
        let kn = ode.kappa.norm();
        let mut x = (160.0 / kn).ln().max(pf.t_r + 0.5).max(min_re.unwrap_or(0.0));
        let (s, xi, terms) = loop {
            if x > ANCHOR_CAP {
                return Err(Error::Numerical(format!(
                    "matching point beyond xi = {ANCHOR_CAP} for k = {sk}"
                )));
            }
            let s = ray_param(gamma, x);
            let xi = ray_point(gamma, s);
            let terms = ode.riccati_terms(1.0, xi, WKB_TOL, WKB_TERMS);
            let last = terms.last().unwrap().norm();
            if last < 1e-13 * terms[0].norm() {
                break (s, xi, terms);
            }
            x += 0.25;
        };
        let y: Complex64 = terms.iter().sum();
        let tail = tail_integral(&ode, &pf, gamma, s)?;
        let phi = pf.eval(xi)?;
        let log_v = c(0.5 * LN_2) - xi * 0.5 + Complex64::i() * phi - tail;
        Ok(Anchor { s, xi, log_v, y, tail, form: pf.form })
    }
}

/// `int_{xi(s)}^inf [y + 1/2 - i phi'] dxi` along the ray.
fn tail_integral(ode: &Radial, pf: &PhaseFunction, gamma: f64, s0: f64) -> Result<Complex64> {
    let e = Complex64::from_polar(1.0, gamma);
    let kappa = ode.kappa;
    let k2 = kappa * kappa;
    let integrand = |tau: f64| -> Complex64 {
        if tau <= 0.0 {
            return c(0.0);
        }
        let s = s0 / tau;
        let xi = ray_point(gamma, s);
        let ch = xi.cosh();
        if !ch.re.is_finite() {
            return c(0.0);
        }
        let eps = pf.zeta() / (k2 * ch);
        let delta = ode.mu_t / (k2 * ch * ch);
        let a = (c(1.0) + eps - delta).sqrt();
        let b = (c(1.0) + eps).sqrt();
        let d0 = Complex64::i() * kappa * ch * (-delta) / (a + b);
        let terms = ode.riccati_terms(1.0, xi, 1e-17, WKB_TERMS);
        let rest: Complex64 = terms.iter().skip(1).sum::<Complex64>() + 0.5;
        let dxi = e * s0 / (tau * (tau + e * s0));
        (d0 + rest) * dxi
    };
    let r = quad::integrate(integrand, 0.0, 1.0, 1e-13, 1e-15, 4000);
    if !r.value.re.is_finite() || !r.value.im.is_finite() {
        return Err(Error::Numerical("tail correction is not finite".into()));
    }
    Ok(r.value)
}

/// Points of the ray path from parameter `s_hi` down to 0, at least every
/// 0.1 in `ln(1+s)`, including the requested parameters.
fn ray_nodes(gamma: f64, s_hi: f64, extra: &[f64]) -> Vec<f64> {
    let u_hi = s_hi.ln_1p();
    let n = (u_hi / 0.1).ceil().max(1.0) as usize;
    let mut s: Vec<f64> = (0..=n).map(|i| (u_hi * i as f64 / n as f64).exp_m1()).collect();
    s.extend(extra.iter().copied().filter(|&x| x > 0.0 && x < s_hi));
    s.push(s_hi);
    s.sort_by(|a, b| b.total_cmp(a));
    s.dedup_by(|a, b| (*a - *b).abs() <= 1e-13 * a.abs().max(1.0));
    let _ = gamma;
    s
}

struct Traced {
    at_zero: State,
    samples: Vec<(f64, State)>,
    anchor: Anchor,
}

/// Integrates the `sigma` wave inward along its ray to `xi = 0`, recording
/// states at the requested ray parameters.
fn trace_inward(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    sigma: f64,
    gamma: f64,
    record: &[f64],
    min_re: Option<f64>,
) -> Result<Traced> {
    let sk = k * sigma;
    let anchor = Anchor::build(params, sk, mu, gamma, min_re)?;
    let ode = radial(params, k, mu);
    let mut st = State { v: c(1.0), dv: anchor.y, log_scale: 0.0 };
    // fold the complex log into a unit-modulus mantissa and a real scale
    st.v = Complex64::from_polar(1.0, anchor.log_v.im);
    st.dv = anchor.y * st.v;
    st.log_scale = anchor.log_v.re;
    let nodes = ray_nodes(gamma, anchor.s, record);
    let mut samples = Vec::new();
    let mut prev_xi = anchor.xi;
    for &s in &nodes {
        let xi = ray_point(gamma, s);
        st = chord(&ode, prev_xi, xi, st)?;
        prev_xi = xi;
        if record.iter().any(|&r| (r - s).abs() <= 1e-13 * r.abs().max(1.0)) {
            samples.push((s, st));
        }
    }
    st = chord(&ode, prev_xi, c(0.0), st)?;
    Ok(Traced { at_zero: st, samples, anchor })
}

/// Integrates forward along the real axis from `xi = 0` through `points`.
fn forward_real(ode: &Radial, start: State, points: &[f64]) -> Result<Vec<(f64, State)>> {
    let mut sorted: Vec<f64> = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut st = start;
    let mut prev = 0.0;
    let mut out = Vec::with_capacity(sorted.len());
    for &x in &sorted {
        st = chord(ode, c(prev), c(x), st)?;
        prev = x;
        out.push((x, st));
    }
    Ok(out)
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::Precondition("grid points must be finite and >= 0".into()));
    }
    Ok(())
}

fn to_samples(list: Vec<(f64, State)>, order: &[f64], deriv_factor: impl Fn(f64) -> Complex64) -> Result<Vec<WaveSample>> {
    order
        .iter()
        .map(|&x| {
            let (_, st) = list
                .iter()
                .find(|(p, _)| (p - x).abs() <= 1e-12 * x.abs().max(1.0))
                .ok_or_else(|| Error::Numerical(format!("no sample recorded at {x}")))?;
            let (v, dv) = st.value()?;
            Ok(WaveSample { x, value: v, derivative: dv * deriv_factor(x) })
        })
        .collect()
}

/// Real-axis samples of the `sigma` wave; `Ok((samples, gamma, anchor))`.
fn sigma_wave(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    sigma: f64,
    gamma: Option<f64>,
    grid: &[f64],
) -> Result<(Vec<(f64, State)>, State, f64, Anchor)> {
    if k.norm() == 0.0 {
        return Err(Error::Precondition("k = 0 is excluded".into()));
    }
    check_grid(grid)?;
    let sk = k * sigma / params.h;
    let gamma = match gamma {
        Some(g) => {
            check_ray(sk, g)?;
            g
        }
        None => default_ray_angle(sk)?,
    };
    if gamma == 0.0 {
        let far = grid.iter().copied().fold(0.0, f64::max);
        let record: Vec<f64> = grid.iter().filter(|&&x| x > 0.0).map(|&x| x.exp_m1()).collect();
        let tr = trace_inward(params, k, mu, sigma, 0.0, &record, Some(far + 0.5))?;
        let mut list: Vec<(f64, State)> = tr.samples.iter().map(|&(s, st)| (s.ln_1p(), st)).collect();
        if grid.iter().any(|&x| x == 0.0) {
            list.push((0.0, tr.at_zero));
        }
        Ok((list, tr.at_zero, 0.0, tr.anchor))
    } else {
        let tr = trace_inward(params, k, mu, sigma, gamma, &[], None)?;
        let ode = radial(params, k, mu);
        let mut list = forward_real(&ode, tr.at_zero, grid)?;
        list.push((0.0, tr.at_zero));
        Ok((list, tr.at_zero, gamma, tr.anchor))
    }
}

fn build_wave(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    sigma: f64,
    ray_angle: Option<f64>,
    grid: &[f64],
) -> Result<WaveSolution> {
    let (list, _, gamma, anchor) = sigma_wave(params, k, mu, sigma, ray_angle, grid)?;
    Ok(WaveSolution {
        kind: if sigma > 0.0 { WaveKind::Outgoing } else { WaveKind::Incoming },
        k,
        mu,
        ray_angle: gamma,
        xi_max: anchor.xi,
        tail_correction: anchor.tail,
        phase_form: Some(anchor.form),
        samples: to_samples(list, grid, |_| c(1.0))?,
    })
}

/// Outgoing solution `v+ ~ sqrt(2) e^{-xi/2} e^{i phi(xi,k)}` sampled on
/// the real `xi` grid. `ray_angle = None` selects the default rotation.
pub fn outgoing_wave(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    ray_angle: Option<f64>,
    grid: &[f64],
) -> Result<WaveSolution> {
    build_wave(params, k, mu, 1.0, ray_angle, grid)
}

/// Incoming solution `v- ~ sqrt(2) e^{-xi/2} e^{-i phi(xi,k)}`.
pub fn incoming_wave(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    ray_angle: Option<f64>,
    grid: &[f64],
) -> Result<WaveSolution> {
    build_wave(params, k, mu, -1.0, ray_angle, grid)
}

/// `omega(x) = v+(Log(1 + e^{i gamma} x))` on the rotated ray, with
/// `d omega / dx`.
pub fn rotated_wave(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    gamma: f64,
    xs: &[f64],
) -> Result<WaveSolution> {
    check_grid(xs)?;
    check_ray(k / params.h, gamma)?;
    let tr = trace_inward(params, k, mu, 1.0, gamma, xs, None)?;
    let mut list = tr.samples;
    list.push((0.0, tr.at_zero));
    let e = Complex64::from_polar(1.0, gamma);
    let samples = xs
        .iter()
        .map(|&x| {
            let far = list.iter().find(|(p, _)| (p - x).abs() <= 1e-12 * x.abs().max(1.0));
            let st = match far {
                Some((_, st)) => *st,
                None => {
                    // beyond the matching point: continue outward along the ray
                    let ode = radial(params, k, mu);
                    let (v, dv) = (Complex64::from_polar(1.0, tr.anchor.log_v.im), tr.anchor.y);
                    let st0 = State { v, dv: dv * v, log_scale: tr.anchor.log_v.re };
                    chord(&ode, tr.anchor.xi, ray_point(gamma, x), st0)?
                }
            };
            let (v, dv) = st.value()?;
            Ok(WaveSample { x, value: v, derivative: dv * e / (c(1.0) + e * x) })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WaveSolution {
        kind: WaveKind::Rotated,
        k,
        mu,
        ray_angle: gamma,
        xi_max: tr.anchor.xi,
        tail_correction: tr.anchor.tail,
        phase_form: Some(tr.anchor.form),
        samples,
    })
}

/// Regular solution with `v0(0) = 1`, `v0'(0) = 0`.
pub fn regular_wave(params: &ProblemParams, k: Complex64, mu: Complex64, grid: &[f64]) -> Result<WaveSolution> {
    if k.norm() == 0.0 {
        return Err(Error::Precondition("k = 0 is excluded".into()));
    }
    check_grid(grid)?;
    let ode = radial(params, k, mu);
    let list = forward_real(&ode, State { v: c(1.0), dv: c(0.0), log_scale: 0.0 }, grid)?;
    Ok(WaveSolution {
        kind: WaveKind::Regular,
        k,
        mu,
        ray_angle: 0.0,
        xi_max: c(0.0),
        tail_correction: c(0.0),
        phase_form: None,
        samples: to_samples(list, grid, |_| c(1.0))?,
    })
}

fn wronskian(f: (Complex64, Complex64), g: (Complex64, Complex64)) -> Complex64 {
    f.1 * g.0 - f.0 * g.1
}

/// Jost functions `f+- = W(v+-, v0)` and `s = f-/f+`, with explicit ray
/// angles for the two waves (`None` selects the default).
pub fn jost_with_rays(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    ray_plus: Option<f64>,
    ray_minus: Option<f64>,
) -> Result<JostData> {
    let (lp, zp, gp, ap) = sigma_wave(params, k, mu, 1.0, ray_plus, &JOST_POINTS)?;
    let (lm, zm, gm, _) = sigma_wave(params, k, mu, -1.0, ray_minus, &JOST_POINTS)?;
    let ode = radial(params, k, mu);
    let reg = forward_real(&ode, State { v: c(1.0), dv: c(0.0), log_scale: 0.0 }, &JOST_POINTS)?;

    let w_at = |list: &[(f64, State)], x: f64| -> Result<Complex64> {
        let (_, st) = list.iter().find(|(p, _)| (p - x).abs() < 1e-12).unwrap();
        let (_, r) = reg.iter().find(|(p, _)| (p - x).abs() < 1e-12).unwrap();
        // scale factors multiply out after the mantissa product
        let w = wronskian((st.v, st.dv), (r.v, r.dv));
        let out = w * (st.log_scale + r.log_scale).exp();
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(Error::Numerical("Jost function overflows".into()));
        }
        Ok(out)
    };
    let collect = |list: &[(f64, State)], at0: &State| -> Result<(Complex64, f64)> {
        let f0 = at0.dv * at0.log_scale.exp();
        let mut vals = vec![f0];
        for &x in &JOST_POINTS {
            vals.push(w_at(list, x)?);
        }
        let mean: Complex64 = vals.iter().sum::<Complex64>() / vals.len() as f64;
        let spread = vals
            .iter()
            .map(|v| (v - mean).norm())
            .fold(0.0, f64::max)
            / mean.norm().max(1e-300);
        Ok((mean, spread))
    };
    let (f_plus, sp) = collect(&lp, &zp)?;
    let (f_minus, sm) = collect(&lm, &zm)?;
    let consistency = sp.max(sm);
    if consistency > 1e-6 {
        return Err(Error::Numerical(format!(
            "Wronskian inconsistency {consistency:.2e} at k = {k}, mu = {mu}"
        )));
    }
    let w_pm = wronskian((zp.v, zp.dv), (zm.v, zm.dv)) * (zp.log_scale + zm.log_scale).exp();
    let two_ik = Complex64::new(0.0, 2.0) * k / params.h;
    let wronskian_check = ((w_pm - two_ik) / two_ik).norm();
    let s_matrix = if f_plus.norm() > 0.0 {
        f_minus / f_plus
    } else {
        Complex64::new(f64::INFINITY, 0.0)
    };
    Ok(JostData {
        k,
        mu,
        f_plus,
        f_minus,
        s_matrix,
        wronskian_check,
        consistency,
        ray_plus: gp,
        ray_minus: gm,
        phase_form: ap.form,
    })
}

pub fn jost(params: &ProblemParams, k: Complex64, mu: Complex64) -> Result<JostData> {
    jost_with_rays(params, k, mu, None, None)
}

/// `f+(k)` alone, as used in zero searches.
pub fn jost_plus(params: &ProblemParams, k: Complex64, mu: Complex64, ray: Option<f64>) -> Result<Complex64> {
    let (_, z, _, _) = sigma_wave(params, k, mu, 1.0, ray, &[])?;
    let f = z.dv * z.log_scale.exp();
    if !f.re.is_finite() || !f.im.is_finite() {
        return Err(Error::Numerical("Jost function overflows".into()));
    }
    Ok(f)
}

/// Value and derivative of the `sigma` wave and the regular wave at real
/// points, for the Green's function.
pub(crate) fn pointwise(
    params: &ProblemParams,
    k: Complex64,
    mu: Complex64,
    points: &[f64],
) -> Result<(Vec<(Complex64, Complex64)>, Vec<(Complex64, Complex64)>, Complex64)> {
    let (list, z, _, _) = sigma_wave(params, k, mu, 1.0, None, points)?;
    let f_plus = z.dv * z.log_scale.exp();
    let ode = radial(params, k, mu);
    let reg = forward_real(&ode, State { v: c(1.0), dv: c(0.0), log_scale: 0.0 }, points)?;
    let find = |l: &[(f64, State)], x: f64| -> Result<(Complex64, Complex64)> {
        let (_, st) = l
            .iter()
            .find(|(p, _)| (p - x).abs() <= 1e-12 * x.abs().max(1.0))
            .ok_or_else(|| Error::Numerical(format!("no sample at {x}")))?;
        st.value()
    };
    let plus = points.iter().map(|&x| find(&list, x)).collect::<Result<Vec<_>>>()?;
    let regular = points.iter().map(|&x| find(&reg, x)).collect::<Result<Vec<_>>>()?;
    Ok((plus, regular, f_plus))
}
