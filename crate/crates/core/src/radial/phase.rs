use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ProblemParams;
use crate::numerics::quad;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseForm {
    Simplified,
    Decomposed,
}

/// Global phase function of the radial equation, in the units where the
/// equation reads `v'' + (kappa^2 cosh^2 + zeta cosh - mu~) v = 0` with
/// `kappa = k/h`, `zeta = Z+/h^2`, `mu~ = mu/h^2`.
///
/// Beyond the real cutoff `t_r` both forms integrate
/// `kappa cosh(t) sqrt(1 + zeta/(kappa^2 cosh t))`; below it the decomposed
/// form freezes the Coulomb tail at its cutoff value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseFunction {
    pub k: Complex64,
    pub z_plus: f64,
    pub mu: Complex64,
    pub h: f64,
    pub form: PhaseForm,
    /// Patch index: the long-range part satisfies `sup |l| <= 1/j`.
    pub j: usize,
    pub t_r: f64,
    /// Continuity constant added to the decomposed form.
    pub g: Complex64,
    pub g_computed: bool,
    offset: Complex64,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

const QTOL: f64 = 1e-13;

fn line_integral<F: Fn(Complex64) -> Complex64>(f: F, a: Complex64, b: Complex64) -> Complex64 {
    let d = b - a;
    if d.norm() == 0.0 {
        return c(0.0);
    }
    quad::integrate(|u| f(a + d * u) * d, 0.0, 1.0, QTOL, 1e-300, 2000).value
}

impl PhaseFunction {
    pub fn new(params: &ProblemParams, k: Complex64, mu: Complex64) -> Result<Self> {
        if k.norm() == 0.0 || !k.re.is_finite() || !k.im.is_finite() {
            return Err(Error::Precondition("phase function needs finite k != 0".into()));
        }
        let h = params.h;
        let kappa = k / h;
        let zeta = params.z_plus / (h * h);
        let k2 = kappa.norm_sqr();
        let t_r = (2.0 * zeta.abs() / k2).asinh().max(1.0);
        let j = ((2.0 / k2).ceil() as usize).max(1);
        let ratio = zeta / (kappa * kappa);
        let integrand = move |t: f64| kappa * t.cosh() * (c(1.0) + ratio / t.cosh()).sqrt();
        let on_cut = ratio.im == 0.0 && ratio.re <= -1.0;
        let (form, g, g_computed, offset) = if k2 > zeta.abs() {
            let p = quad::integrate(|t| integrand(t), 0.0, t_r, QTOL, 1e-300, 2000).value;
            (PhaseForm::Simplified, c(0.0), false, p)
        } else {
            let cr = (c(1.0) + ratio / t_r.cosh()).sqrt();
            let (g, computed) = if on_cut {
                (c(0.0), false)
            } else {
                let g = quad::integrate(
                    |t| kappa * t.cosh() * ((c(1.0) + ratio / t.cosh()).sqrt() - cr),
                    0.0,
                    t_r,
                    QTOL,
                    1e-300,
                    2000,
                )
                .value;
                (g, true)
            };
            (PhaseForm::Decomposed, g, computed, kappa * cr * t_r.sinh() + g)
        };
        Ok(PhaseFunction { k, z_plus: params.z_plus, mu, h, form, j, t_r, g, g_computed, offset })
    }

    pub fn kappa(&self) -> Complex64 {
        self.k / self.h
    }

    pub fn zeta(&self) -> f64 {
        self.z_plus / (self.h * self.h)
    }

    /// `d phi / d xi` on the tail `Re xi >= t_r`.
    pub fn tail_derivative(&self, xi: Complex64) -> Complex64 {
        let kappa = self.kappa();
        let ch = xi.cosh();
        kappa * ch * (c(1.0) + self.zeta() / (kappa * kappa * ch)).sqrt()
    }

    /// `1 + zeta/(kappa^2 cosh xi)`, the radicand of the simplified form.
    fn radicand(&self, xi: Complex64) -> Complex64 {
        let kappa = self.kappa();
        c(1.0) + self.zeta() / (kappa * kappa * xi.cosh())
    }

    fn check_branch(&self, a: Complex64, b: Complex64) -> Result<()> {
        let n = 256;
        let mut prev = self.radicand(a);
        for i in 1..=n {
            let xi = a + (b - a) * (i as f64 / n as f64);
            let cur = self.radicand(xi);
            let crosses = prev.re < 0.0 && cur.re < 0.0 && (prev.im >= 0.0) != (cur.im >= 0.0);
            if crosses || cur.norm() < 1e-14 {
                return Err(Error::BranchCut(format!("square-root branch cut met near xi = {xi}")));
            }
            prev = cur;
        }
        Ok(())
    }

    pub fn eval(&self, xi: Complex64) -> Result<Complex64> {
        let kappa = self.kappa();
        if xi.re >= self.t_r {
            let start = c(self.t_r);
            return Ok(self.offset + line_integral(|t| self.tail_derivative(t), start, xi));
        }
        match self.form {
            PhaseForm::Decomposed => {
                let cr = (c(1.0) + self.zeta() / (kappa * kappa * self.t_r.cosh())).sqrt();
                Ok(kappa * cr * xi.sinh() + self.g)
            }
            PhaseForm::Simplified => {
                if xi.im != 0.0 {
                    self.check_branch(c(0.0), xi)?;
                }
                Ok(line_integral(|t| kappa * t.cosh() * self.radicand(t).sqrt(), c(0.0), xi))
            }
        }
    }
}

/// `phi(xi, k)`; odd in `k`.
pub fn phase(pf: &PhaseFunction, xi: Complex64) -> Result<Complex64> {
    pf.eval(xi)
}
