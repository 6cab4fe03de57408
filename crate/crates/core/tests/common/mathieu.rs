//! Floquet-series oracle for the radial equation at `Z+ = 0`, where it is
//! the modified Mathieu equation `u'' = (a - 2q cosh 2x) u` with
//! `a = (mu - k^2/2)/h^2`, `q = k^2/(4h^2)`.
//!
//! Solutions are `u(x) = sum_n c_{2n} exp(-(nu + 2n) x)`, a Laurent series
//! in `e^x` that converges in the whole plane.

use num_complex::Complex64;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[derive(Debug, Clone)]
pub struct Floquet {
    pub nu: Complex64,
    /// `c_{2n}/c_{2n-2}` and `c_{-2n}/c_{-2n+2}` for `n = 1..=n_max`
    /// (index 0 unused); `c_0 = 1`.
    pub ratios: (Vec<Complex64>, Vec<Complex64>),
    pub n_max: usize,
}

/// `cos(nu pi)` from the monodromy of `y'' + (a - 2q cos 2t) y = 0` over
/// one period, by classical RK4.
fn monodromy_trace(a: Complex64, q: Complex64, steps: usize) -> Complex64 {
    let f = |t: f64, y: [Complex64; 2]| [y[1], -(a - q * 2.0 * (2.0 * t).cos()) * y[0]];
    let dt = std::f64::consts::PI / steps as f64;
    let mut y = [cx(1.0, 0.0), cx(0.0, 0.0)];
    for i in 0..steps {
        let t = i as f64 * dt;
        let k1 = f(t, y);
        let k2 = f(t + 0.5 * dt, [y[0] + k1[0] * (0.5 * dt), y[1] + k1[1] * (0.5 * dt)]);
        let k3 = f(t + 0.5 * dt, [y[0] + k2[0] * (0.5 * dt), y[1] + k2[1] * (0.5 * dt)]);
        let k4 = f(t + dt, [y[0] + k3[0] * dt, y[1] + k3[1] * dt]);
        for j in 0..2 {
            y[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (dt / 6.0);
        }
    }
    y[0]
}

/// Ratios `c_{2n}/c_{2n-2}` (`dir = 1`) or `c_{-2n}/c_{-2n+2}` (`dir = -1`)
/// for `n = 1..=n_max`, from the minimal solution of the recurrence.
fn ratios(a: Complex64, q: Complex64, nu: Complex64, dir: i64, n_max: usize) -> Vec<Complex64> {
    let d = |n: i64| a - (nu + 2.0 * n as f64).powi(2);
    let mut r = vec![cx(0.0, 0.0); n_max + 2];
    for n in (1..=n_max).rev() {
        r[n] = q / (d(dir * n as i64) - q * r[n + 1]);
    }
    r.truncate(n_max + 1);
    r
}

fn characteristic(a: Complex64, q: Complex64, nu: Complex64, n_max: usize) -> Complex64 {
    let p = ratios(a, q, nu, 1, n_max);
    let m = ratios(a, q, nu, -1, n_max);
    (a - nu * nu) - q * (p[1] + m[1])
}

impl Floquet {
    pub fn new(a: Complex64, q: Complex64, n_max: usize) -> Floquet {
        let tr = monodromy_trace(a, q, 20_000);
        let mut nu = tr.acos() / std::f64::consts::PI;
        for _ in 0..50 {
            let f = characteristic(a, q, nu, n_max);
            let d = 1e-7 * nu.norm().max(1.0);
            let df = (characteristic(a, q, nu + d, n_max) - characteristic(a, q, nu - d, n_max)) / (2.0 * d);
            let step = f / df;
            nu -= step;
            if step.norm() < 1e-15 * nu.norm().max(1.0) {
                break;
            }
        }
        let p = ratios(a, q, nu, 1, n_max);
        let m = ratios(a, q, nu, -1, n_max);
        Floquet { nu, ratios: (p, m), n_max }
    }

    /// `u(x) = sum c_{2n} exp(-(nu + 2n) x)`, accumulated outward from
    /// `n = 0` so that no factor over- or underflows on its own.
    pub fn eval(&self, x: Complex64) -> Complex64 {
        let t0 = (-self.nu * x).exp();
        let (up, down) = ((-2.0 * x).exp(), (2.0 * x).exp());
        let mut sum = t0;
        let (mut tp, mut tm) = (t0, t0);
        for n in 1..=self.n_max {
            tp *= self.ratios.0[n] * up;
            tm *= self.ratios.1[n] * down;
            if tp.norm() == 0.0 && tm.norm() == 0.0 {
                break;
            }
            sum += tp + tm;
        }
        sum
    }

    /// Even solution normalised to `1` at the origin.
    pub fn even(&self, x: Complex64) -> Complex64 {
        (self.eval(x) + self.eval(-x)) / (self.eval(cx(0.0, 0.0)) * 2.0)
    }
}

/// Value of the even (regular) radial solution at `x` for `Z+ = 0`.
pub fn regular_at(k: Complex64, mu: Complex64, h: f64, x: Complex64, n_max: usize) -> Complex64 {
    let a = (mu - k * k * 0.5) / (h * h);
    let q = k * k / (4.0 * h * h);
    Floquet::new(a, q, n_max).even(x)
}

/// Function of `k` whose zeros near `k0` (`Im k0 < 0`) are those of `f+`:
/// the regular solution far out on the ray where the outgoing wave is
/// recessive and the incoming one dominant.
pub fn jost_zero_function(k0: Complex64, mu: Complex64, h: f64, reach: f64) -> impl Fn(Complex64) -> Complex64 {
    let theta = std::f64::consts::FRAC_PI_2 - k0.arg();
    let x = Complex64::new(reach, theta);
    let n_max = (3.0 * (k0.norm() / (2.0 * h)) * reach.exp()) as usize + 40;
    move |k| regular_at(k, mu, h, x, n_max)
}
