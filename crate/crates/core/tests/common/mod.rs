//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod mathieu;

use num_complex::Complex64;

/// Change of `arg f` along the segment `a -> b`, refined until consecutive
/// phase steps stay below `pi/8`.
fn arg_change(f: &dyn Fn(Complex64) -> Complex64, a: Complex64, fa: Complex64, b: Complex64, fb: Complex64, depth: usize) -> f64 {
    let d = (fb / fa).arg();
    if d.abs() < std::f64::consts::PI / 8.0 || depth == 0 {
        return d;
    }
    let mid = 0.5 * (a + b);
    let fm = f(mid);
    arg_change(f, a, fa, mid, fm, depth - 1) + arg_change(f, mid, fm, b, fb, depth - 1)
}

/// Winding number of `f` around zero along the closed polygon `pts`.
pub fn winding_polygon(f: &dyn Fn(Complex64) -> Complex64, pts: &[Complex64]) -> i64 {
    let vals: Vec<Complex64> = pts.iter().map(|&z| f(z)).collect();
    let mut total = 0.0;
    for i in 0..pts.len() {
        let j = (i + 1) % pts.len();
        total += arg_change(f, pts[i], vals[i], pts[j], vals[j], 12);
    }
    (total / (2.0 * std::f64::consts::PI)).round() as i64
}

pub fn winding_circle(f: &dyn Fn(Complex64) -> Complex64, center: Complex64, radius: f64, n: usize) -> i64 {
    let pts: Vec<Complex64> = (0..n)
        .map(|i| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * i as f64 / n as f64))
        .collect();
    winding_polygon(f, &pts)
}

fn box_points(lo: Complex64, hi: Complex64, per_side: usize) -> Vec<Complex64> {
    let corners = [lo, Complex64::new(hi.re, lo.im), hi, Complex64::new(lo.re, hi.im)];
    let mut pts = Vec::new();
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        for j in 0..per_side {
            pts.push(a + (b - a) * (j as f64 / per_side as f64));
        }
    }
    pts
}

pub fn winding_box(f: &dyn Fn(Complex64) -> Complex64, lo: Complex64, hi: Complex64) -> i64 {
    winding_polygon(f, &box_points(lo, hi, 16))
}

/// Locates the single zero inside the box by repeated quadrisection,
/// keeping the sub-box with winding number one.
pub fn bisect_zero(f: &dyn Fn(Complex64) -> Complex64, mut lo: Complex64, mut hi: Complex64, size: f64) -> Option<Complex64> {
    if winding_box(f, lo, hi) != 1 {
        return None;
    }
    while (hi - lo).norm() > size {
        let mid = 0.5 * (lo + hi);
        // sub-boxes slightly overlap so a zero on a shared edge is not lost
        let eps = 1e-3 * (hi - lo);
        let quads = [
            (lo, mid + eps),
            (Complex64::new(mid.re - eps.re, lo.im), Complex64::new(hi.re, mid.im + eps.im)),
            (mid - eps, hi),
            (Complex64::new(lo.re, mid.im - eps.im), Complex64::new(mid.re + eps.re, hi.im)),
        ];
        let next = quads.iter().find(|(a, b)| winding_box(f, *a, *b) == 1)?;
        lo = next.0;
        hi = next.1;
    }
    Some(0.5 * (lo + hi))
}
