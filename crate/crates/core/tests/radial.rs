use num_complex::Complex64;
use proptest::prelude::*;
use tcres::radial::*;
use tcres::ProblemParams;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn params(zp: f64, h: f64) -> ProblemParams {
    ProblemParams::from_sum_difference(zp, if zp == 1.0 { 0.5 } else { 1.0 }, h).unwrap()
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Classical RK4 for `v'' + Q v = 0` along the real axis, `Q` in units `h = 1`.
fn rk4(zp: f64, k: Complex64, mu: Complex64, x0: f64, v0: Complex64, d0: Complex64, x1: f64, n: usize) -> (Complex64, Complex64) {
    let q = |x: f64| k * k * x.cosh().powi(2) + zp * x.cosh() - mu;
    let h = (x1 - x0) / n as f64;
    let (mut v, mut d) = (v0, d0);
    let mut x = x0;
    for _ in 0..n {
        let f = |x: f64, v: Complex64, d: Complex64| (d, -q(x) * v);
        let (a1, b1) = f(x, v, d);
        let (a2, b2) = f(x + h / 2.0, v + a1 * (h / 2.0), d + b1 * (h / 2.0));
        let (a3, b3) = f(x + h / 2.0, v + a2 * (h / 2.0), d + b2 * (h / 2.0));
        let (a4, b4) = f(x + h, v + a3 * h, d + b3 * h);
        v += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0);
        d += (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (h / 6.0);
        x += h;
    }
    (v, d)
}

/// Even solution of `v'' + (k^2 cosh^2 - mu) v = 0` as a power series in
/// `s = sinh(xi)`; converges for `|s| < 1`.
fn sinh_series(k: Complex64, mu: Complex64, xi: f64) -> Complex64 {
    let s = xi.sinh();
    let k2 = k * k;
    let mut a = vec![cx(1.0, 0.0), cx(0.0, 0.0)];
    for n in 0..400usize {
        let prev = if n >= 2 { a[n - 2] } else { cx(0.0, 0.0) };
        let next = -((k2 - mu + (n * n) as f64) * a[n] + k2 * prev) / (((n + 2) * (n + 1)) as f64);
        a.push(next);
    }
    a.iter().rev().fold(cx(0.0, 0.0), |acc, &c| acc * s + c)
}

#[test]
fn free_phase() {
    let p = ProblemParams::from_sum_difference(0.0, -1.0, 1.0).unwrap();
    let pf = PhaseFunction::new(&p, cx(2.0, 0.0), cx(1.0, 0.0)).unwrap();
    let v = phase(&pf, cx(1.0, 0.0)).unwrap();
    assert!((v - cx(2.0 * 1f64.sinh(), 0.0)).norm() < 1e-12);
    assert!((v.re - 2.35040).abs() < 1e-5);
}

#[test]
fn phase_is_odd() {
    let p = params(2.0, 1.0);
    for k in [cx(1.5, 0.3), cx(0.4, -0.2), cx(3.0, 0.0)] {
        let a = PhaseFunction::new(&p, k, cx(1.0, 0.0)).unwrap();
        let b = PhaseFunction::new(&p, -k, cx(1.0, 0.0)).unwrap();
        for xi in [0.5, 2.0, 4.0] {
            let (x, y) = (phase(&a, cx(xi, 0.0)).unwrap(), phase(&b, cx(xi, 0.0)).unwrap());
            assert!((x + y).norm() < 1e-12 * x.norm().max(1.0), "k={k} xi={xi}");
        }
    }
    assert_eq!(PhaseFunction::new(&p, cx(0.4, -0.2), cx(1.0, 0.0)).unwrap().form, PhaseForm::Decomposed);
}

#[test]
fn phase_asymptotics() {
    let p = params(2.0, 1.0);
    let pf = PhaseFunction::new(&p, cx(3.0, 0.0), cx(0.0, 0.0)).unwrap();
    let v = phase(&pf, cx(10.0, 0.0)).unwrap();
    assert!((v.re - 3.0 * 10f64.sinh() - 2.0 / 6.0 * 10.0).abs() <= 1.0);
    for xi in [8.0, 10.0, 12.0] {
        let v = phase(&pf, cx(xi, 0.0)).unwrap();
        assert!((v.re - 3.0 * xi.sinh() - xi / 3.0).abs() <= 1.0);
    }
    assert!(PhaseFunction::new(&p, cx(0.0, 0.0), cx(0.0, 0.0)).is_err());
}

#[test]
fn wronskian_of_distinguished_waves() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.0, 0.5), cx(1.0, 0.0));
    let grid = [0.25, 1.0, 2.0];
    let a = outgoing_wave(&p, k, mu, None, &grid).unwrap();
    let b = incoming_wave(&p, k, mu, None, &grid).unwrap();
    for (s, t) in a.samples.iter().zip(&b.samples) {
        let w = s.derivative * t.value - s.value * t.derivative;
        assert!(rel(w, cx(0.0, 2.0) * k) < 1e-8, "xi={} W={w}", s.x);
    }
    let j = jost(&p, k, mu).unwrap();
    assert!(j.wronskian_check < 1e-8);
}

#[test]
fn outgoing_matches_independent_integration() {
    // Z+ = 0, decaying direction: backward RK4 from crude plane-wave data
    let p = ProblemParams::from_sum_difference(0.0, -1.0, 1.0).unwrap();
    let (k, mu) = (cx(1.0, 1.0), cx(1.3, 0.0));
    let grid: Vec<f64> = (0..=10).map(|i| 0.5 + 0.25 * i as f64).collect();
    let w = outgoing_wave(&p, k, mu, None, &grid).unwrap();
    let x_far: f64 = 4.0;
    let v_far = (Complex64::i() * k * x_far.sinh()).exp();
    let d_far = Complex64::i() * k * x_far.cosh() * v_far;
    let mut ratios = Vec::new();
    for s in &w.samples {
        let (v, _) = rk4(0.0, k, mu, x_far, v_far, d_far, s.x, 40_000);
        ratios.push(s.value / v);
    }
    for r in &ratios {
        assert!(rel(*r, ratios[0]) < 1e-6, "{r} vs {}", ratios[0]);
    }
}

#[test]
fn outgoing_tends_to_its_asymptotic_form() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.0, 0.5), cx(1.0, 0.0));
    let w = outgoing_wave(&p, k, mu, None, &[3.0]).unwrap();
    let pf = PhaseFunction::new(&p, k, mu).unwrap();
    let model = cx(2f64.sqrt(), 0.0) * (-1.5f64).exp() * (Complex64::i() * phase(&pf, cx(3.0, 0.0)).unwrap()).exp();
    let r = asymptotic_ratio(&p, k, mu, 1.0, 0.0, 3.0).unwrap();
    assert!(rel(w.samples[0].value, model * r) < 1e-8);
    let far = asymptotic_ratio(&p, k, mu, 1.0, 0.0, 16.0).unwrap();
    assert!((far - 1.0).norm() < 1e-6);
    assert!(w.xi_max.re >= pf.t_r);
}

#[test]
fn regular_solution() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.2, 0.4), cx(0.5, 0.0));
    let a = regular_wave(&p, k, mu, &[0.0, 2.0]).unwrap();
    let b = regular_wave(&p, -k, mu, &[0.0, 2.0]).unwrap();
    assert_eq!(a.samples[0].value, cx(1.0, 0.0));
    assert_eq!(a.samples[0].derivative, cx(0.0, 0.0));
    assert!(rel(a.samples[1].value, b.samples[1].value) < 1e-10);
    let z = ProblemParams::from_sum_difference(0.0, -1.0, 1.0).unwrap();
    let (k, mu) = (cx(1.0, 1.0), cx(1.3, 0.0));
    let grid = [0.2, 0.5, 0.8];
    let r = regular_wave(&z, k, mu, &grid).unwrap();
    for s in &r.samples {
        assert!(rel(s.value, sinh_series(k, mu, s.x)) < 1e-8, "xi={}", s.x);
    }
}

#[test]
fn jost_identities() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.0, 0.3), cx(1.0, 0.0));
    let a = jost(&p, k, mu).unwrap();
    let b = jost(&p, -k, mu).unwrap();
    assert!(rel(b.f_plus, a.f_minus) < 1e-8);
    let r = jost(&p, cx(2.0, 0.0), cx(1.0, 0.0)).unwrap();
    assert!((r.s_matrix.norm() - 1.0).abs() < 1e-8);
    let q = ProblemParams::from_sum_difference(-2.0, -3.0, 1.0).unwrap();
    let (k, mu) = (cx(1.4, -0.2), cx(0.7, 0.0));
    let s1 = jost(&q, k, mu).unwrap().s_matrix;
    let s2 = jost(&q, -k, mu).unwrap().s_matrix;
    assert!((s1 * s2 - 1.0).norm() < 1e-8);
}

#[test]
fn second_sheet_is_ray_independent() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.5, -0.3), cx(1.0, 0.2));
    let a = jost_with_rays(&p, k, mu, Some(0.3), None).unwrap();
    let b = jost_with_rays(&p, k, mu, Some(0.9), None).unwrap();
    assert!(rel(a.f_plus, b.f_plus) < 1e-6);
    assert!(jost_with_rays(&p, k, mu, Some(0.05), None).is_err());
    let c = jost(&p, k, mu).unwrap();
    assert!(c.ray_plus > 0.0);
    assert!(rel(c.f_plus, a.f_plus) < 1e-6);
}

#[test]
fn wronskian_with_regular_is_constant_on_a_fine_grid() {
    // closely spaced record points leave short chord remainders
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(2.1524758418, 0.3273149307), cx(0.9555281452, 0.0280212));
    let xs: Vec<f64> = (1..=60).map(|i| 0.2 + 0.01 * i as f64).collect();
    let r = regular_wave(&p, k, mu, &xs).unwrap();
    let w = outgoing_wave(&p, k, mu, None, &xs).unwrap();
    let ws: Vec<Complex64> = w
        .samples
        .iter()
        .zip(&r.samples)
        .map(|(a, b)| a.derivative * b.value - a.value * b.derivative)
        .collect();
    assert!(ws.iter().all(|x| rel(*x, ws[0]) < 1e-10));
    assert!(jost(&p, -k, mu).is_ok());
}

#[test]
fn normalisation_scaling() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.1, 0.2), cx(0.8, 0.0));
    let w = outgoing_wave(&p, k, mu, None, &[0.0]).unwrap();
    let r = regular_wave(&p, k, mu, &[0.0]).unwrap();
    let f = |c: f64| {
        let (v, d) = (w.samples[0].value * c, w.samples[0].derivative * c);
        d * r.samples[0].value - v * r.samples[0].derivative
    };
    let j = jost(&p, k, mu).unwrap();
    assert!(rel(f(1.0), j.f_plus) < 1e-12);
    assert!(rel(f(2.0), j.f_plus * 2.0) < 1e-12);
}

#[test]
fn bound_state_sign_change() {
    let p = ProblemParams::from_sum_difference(-2.0, -3.0, 1.0).unwrap();
    let mu = cx(-6.0, 0.0);
    let vals: Vec<f64> = (1..40)
        .map(|i| jost_plus(&p, cx(0.0, 0.05 * i as f64), mu, None).unwrap())
        .map(|f| {
            assert!(f.im.abs() <= 1e-8 * f.norm());
            f.re
        })
        .collect();
    assert!(vals.windows(2).any(|w| w[0].signum() != w[1].signum()));
}

#[test]
fn green_function_relations() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.3, 0.2), cx(1.0, 0.0));
    let a = radial_green(&p, k, mu, 0.4, 1.1).unwrap();
    let b = radial_green(&p, k, mu, 1.1, 0.4).unwrap();
    assert_eq!(a, b);
    let am = radial_green(&p, -k, mu, 0.4, 1.1).unwrap();
    let e = |k: Complex64, x: f64| {
        let r = regular_wave(&p, k, mu, &[x]).unwrap();
        r.samples[0].value / jost(&p, k, mu).unwrap().f_plus
    };
    let rhs = -cx(0.0, 2.0) * k * e(k, 0.4) * e(-k, 1.1);
    assert!(rel(a - am, rhs) < 1e-8);
}

#[test]
fn green_function_solves_the_equation() {
    let p = params(2.0, 1.0);
    let (k, mu) = (cx(1.3, 0.2), cx(1.0, 0.0));
    let hstep = 2e-4;
    let x0 = 1.5;
    let g: Vec<Complex64> = [-1.0, 0.0, 1.0]
        .iter()
        .map(|d| radial_green(&p, k, mu, 0.3, x0 + d * hstep).unwrap())
        .collect();
    let d2 = (g[0] - g[1] * 2.0 + g[2]) / (hstep * hstep);
    let q = k * k * x0.cosh().powi(2) + 2.0 * x0.cosh() - mu;
    let scale = (q * g[1]).norm();
    assert!((d2 + q * g[1]).norm() < 1e-6 * scale.max(1.0), "{} {}", (d2 + q * g[1]).norm(), scale);
}

#[test]
fn partial_wave_sums() {
    let p = ProblemParams::from_sum_difference(2.0, 1.0, 0.5).unwrap();
    let e = cx(2.0, 0.3);
    let pt = (0.4, 0.2);
    let qt = (1.0, -0.7);
    let terms = truncated_green_terms(&p, e, 3, pt, qt).unwrap();
    let s0 = truncated_green_2d(&p, e, 0, pt, qt).unwrap();
    assert_eq!(s0, terms[0]);
    for n in 1..=3 {
        let a = truncated_green_2d(&p, e, n, pt, qt).unwrap();
        let b = truncated_green_2d(&p, e, n - 1, pt, qt).unwrap();
        assert!((a - b - terms[n]).norm() <= 1e-12 * a.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn wronskian_is_constant(kr in 0.5f64..3.0, ki in 0.0f64..0.8, mu in -2.0f64..3.0, zp in -2.0f64..2.0) {
        let p = ProblemParams::from_sum_difference(zp, zp - 1.0, 1.0).unwrap();
        let k = cx(kr, ki);
        let grid = [0.3, 0.9, 1.6, 2.4];
        let a = outgoing_wave(&p, k, cx(mu, 0.0), None, &grid).unwrap();
        let b = regular_wave(&p, k, cx(mu, 0.0), &grid).unwrap();
        let ws: Vec<Complex64> = a.samples.iter().zip(&b.samples)
            .map(|(s, t)| s.derivative * t.value - s.value * t.derivative).collect();
        for w in &ws {
            prop_assert!(rel(*w, ws[0]) < 1e-8);
        }
    }
}
