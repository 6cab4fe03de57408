use num_complex::Complex64;

use super::waves::pointwise;
use crate::angular::{angular_eigenfunction, angular_eigenvalues};
use crate::error::{Error, Result};
use crate::model::{ComplexEnergy, ProblemParams};

/// `G(x, x'; k) = e(x<, k) v+(x>, k)` with `e = v0 / f+`.
pub fn radial_green(params: &ProblemParams, k: Complex64, mu: Complex64, x: f64, x_prime: f64) -> Result<Complex64> {
    let (lo, hi) = if x <= x_prime { (x, x_prime) } else { (x_prime, x) };
    let (plus, regular, f_plus) = pointwise(params, k, mu, &[0.0, lo, hi])?;
    let scale = plus[0].0.norm() * (k.norm() / params.h).max(1.0);
    if !(f_plus.norm() > 1e-12 * scale) {
        return Err(Error::NearPole(format!(
            "|f+| = {:.3e} at k = {k}: at or near a resonance or eigenvalue",
            f_plus.norm()
        )));
    }
    Ok(regular[1].0 / f_plus * plus[2].0)
}

/// Summands `n = 0..=n_max` of the partial-wave expansion of the
/// two-dimensional Green's function at energy `e`.
pub fn truncated_green_terms(
    params: &ProblemParams,
    e: Complex64,
    n_max: usize,
    p: (f64, f64),
    q: (f64, f64),
) -> Result<Vec<Complex64>> {
    let k = ComplexEnergy::from_energy(e)?.k;
    let levels = angular_eigenvalues(params, e, n_max + 1)?;
    let weight = q.0.cosh().powi(2) - q.1.cos().powi(2);
    levels
        .iter()
        .map(|level| {
            let a = angular_eigenfunction(level, p.1)?;
            let b = angular_eigenfunction(level, q.1)?;
            let g = radial_green(params, k, level.mu, p.0, q.0)?;
            Ok(a * b * g * weight)
        })
        .collect()
}

/// Partial-wave sum truncated after `n_max`.
pub fn truncated_green_2d(
    params: &ProblemParams,
    e: Complex64,
    n_max: usize,
    p: (f64, f64),
    q: (f64, f64),
) -> Result<Complex64> {
    Ok(truncated_green_terms(params, e, n_max, p, q)?.into_iter().sum())
}
