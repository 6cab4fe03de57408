//! Asymptotic series for the log-derivative `y = v'/v` of the radial
//! solutions, and the Taylor coefficients of the radial potential.

use num_complex::Complex64;

use crate::numerics::jet::Jet;

/// Scaled radial equation `v'' + Q v = 0`,
/// `Q = kappa^2 cosh^2 xi + zeta cosh xi - mu~`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Radial {
    pub kappa: Complex64,
    pub zeta: f64,
    pub mu_t: Complex64,
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Radial {
    pub fn q(&self, xi: Complex64) -> Complex64 {
        let ch = xi.cosh();
        self.kappa * self.kappa * ch * ch + self.zeta * ch - self.mu_t
    }

    /// Taylor coefficients of `Q(xi0 + t)` up to `t^(len-1)`.
    pub fn q_coeffs(&self, xi0: Complex64, len: usize) -> Vec<Complex64> {
        let (ch, sh) = (xi0.cosh(), xi0.sinh());
        let (ch2, sh2) = ((2.0 * xi0).cosh(), (2.0 * xi0).sinh());
        let k2 = self.kappa * self.kappa;
        let mut out = Vec::with_capacity(len);
        let mut fact = 1.0;
        let mut pow2 = 1.0;
        for i in 0..len {
            if i > 0 {
                fact *= i as f64;
                pow2 *= 2.0;
            }
            let even = i % 2 == 0;
            let c1 = if even { ch } else { sh } / fact;
            let c2 = if i == 0 {
                (1.0 + ch2) * 0.5
            } else {
                (if even { ch2 } else { sh2 }) * (pow2 * 0.5 / fact)
            };
            let mut q = k2 * c2 + self.zeta * c1;
            if i == 0 {
                q -= self.mu_t;
            }
            out.push(q);
        }
        out
    }

    /// Terms `y_0, y_1, ...` of the Riccati series at `xi`, for the
    /// branch `y_0 = sigma i kappa sqrt(Q/kappa^2)`. Stops at the smallest
    /// term or once terms fall below `tol |y_0|`.
    pub fn riccati_terms(&self, sigma: f64, xi: Complex64, tol: f64, max_terms: usize) -> Vec<Complex64> {
        let len = max_terms + 1;
        let k2 = self.kappa * self.kappa;
        let p = Jet { c: self.q_coeffs(xi, len).into_iter().map(|q| q / k2).collect() };
        let y0 = p.sqrt().scale(Complex64::new(0.0, sigma) * self.kappa);
        let inv_2y0 = y0.scale(c(2.0)).recip();
        let mut jets: Vec<Jet> = vec![y0];
        let mut vals = vec![jets[0].value()];
        let scale = vals[0].norm();
        let mut best = f64::INFINITY;
        for n in 1..max_terms {
            let mut acc = jets[n - 1].derivative();
            for j in 1..n {
                let prod = &jets[j] * &jets[n - j];
                acc = &acc + &prod;
            }
            let yn = -&(&acc * &inv_2y0);
            let v = yn.value();
            let mag = v.norm();
            if n >= 3 && mag > best {
                break;
            }
            best = best.min(mag);
            vals.push(v);
            jets.push(yn);
            if mag < tol * scale {
                break;
            }
            if jets[n].len() < 2 {
                break;
            }
        }
        vals
    }
}
