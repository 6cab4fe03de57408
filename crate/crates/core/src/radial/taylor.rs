//! High-order Taylor stepping of `v'' = -Q v` along straight complex chords.

use num_complex::Complex64;

use super::riccati::Radial;
use crate::error::{Error, Result};

const ORDER: usize = 32;
const EPS: f64 = 1e-17;
const RESCALE_HI: f64 = 1e200;
const RESCALE_LO: f64 = 1e-200;

/// Solution value and derivative with a shared factor `exp(log_scale)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct State {
    pub v: Complex64,
    pub dv: Complex64,
    pub log_scale: f64,
}

impl State {
    fn renormalise(&mut self) {
        let m = self.v.norm().max(self.dv.norm());
        if m > RESCALE_HI || (m < RESCALE_LO && m > 0.0) {
            self.v /= m;
            self.dv /= m;
            self.log_scale += m.ln();
        }
    }

    pub fn value(&self) -> Result<(Complex64, Complex64)> {
        let f = self.log_scale.exp();
        let out = (self.v * f, self.dv * f);
        if !out.0.re.is_finite() || !out.0.im.is_finite() || !out.1.re.is_finite() || !out.1.im.is_finite() {
            return Err(Error::Numerical(format!(
                "solution magnitude exp({:.1}) overflows",
                self.log_scale
            )));
        }
        Ok(out)
    }
}

/// One Taylor step from `xi0` in direction `dir` (unit complex), at most
/// `max_len` long. Returns the new state and the length actually taken.
fn step(ode: &Radial, xi0: Complex64, s: State, dir: Complex64, max_len: f64) -> (State, f64) {
    let q0 = ode.q(xi0).norm().sqrt().max(1.0);
    let h0 = dir / q0;
    let mut q = ode.q_coeffs(xi0, ORDER + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for qi in q.iter_mut() {
        *qi *= p;
        p *= h0;
    }
    // w_j = v_j h0^j
    let mut w = vec![Complex64::new(0.0, 0.0); ORDER + 1];
    w[0] = s.v;
    w[1] = s.dv * h0;
    let h02 = h0 * h0;
    for j in 0..ORDER - 1 {
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..=j {
            acc += q[i] * w[j - i];
        }
        w[j + 2] = -acc * h02 / (((j + 2) * (j + 1)) as f64);
    }
    let norm = w[0].norm().max(w[1].norm()).max(1e-300);
    let mut r = f64::INFINITY;
    for j in [ORDER - 1, ORDER] {
        let m = w[j].norm();
        if m > 0.0 {
            r = r.min((EPS * norm / m).powf(1.0 / j as f64));
        }
    }
    let r = r.min(4.0 * q0).max(1e-3).min(max_len * q0);
    let len = r / q0;
    let mut v = Complex64::new(0.0, 0.0);
    let mut dv = Complex64::new(0.0, 0.0);
    for j in (0..=ORDER).rev() {
        v = v * r + w[j];
        if j >= 1 {
            dv = dv * r + w[j] * j as f64;
        }
    }
    // dv holds sum j w_j r^(j-1); convert to d/dxi
    let dv = dv / h0;
    let mut out = State { v, dv, log_scale: s.log_scale };
    out.renormalise();
    (out, len)
}

/// Integrates along the straight chord from `a` to `b`.
pub(crate) fn chord(ode: &Radial, a: Complex64, b: Complex64, mut s: State) -> Result<State> {
    let d = b - a;
    let total = d.norm();
    if total == 0.0 {
        return Ok(s);
    }
    let dir = d / total;
    let mut done = 0.0;
    let mut guard = 0usize;
    while done < total {
        let remaining = total - done;
        let (ns, len) = step(ode, a + dir * done, s, dir, remaining);
        s = ns;
        done += len.min(remaining);
        if remaining - len <= 1e-14 * total {
            break;
        }
        guard += 1;
        if guard > 5_000_000 {
            return Err(Error::Numerical("Taylor integrator step count exceeded".into()));
        }
        if !s.v.re.is_finite() || !s.v.im.is_finite() {
            return Err(Error::Numerical("non-finite value in radial integration".into()));
        }
    }
    Ok(s)
}
