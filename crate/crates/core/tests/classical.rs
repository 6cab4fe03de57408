use num_complex::Complex64;
use tcres::classical::*;
use tcres::model::{ComplexEnergy, Regime, ResonanceRecord, ZeroKind};
use tcres::resonances::{solve_high_energy, solve_high_energy_with, Branch, SolveOptions};
use tcres::ProblemParams;

fn params(zp: f64, zm: f64, h: f64) -> ProblemParams {
    ProblemParams::from_sum_difference(zp, zm, h).unwrap()
}

#[test]
fn curve_identities_hold_at_every_sample() {
    for (zp, zm) in [(2.0, 4.0), (-2.0, 4.0), (4.0, 2.0), (-4.0, 2.0)] {
        let p = params(zp, zm, 0.01);
        let curves = bifurcation_diagram(&p, (-10.0, 10.0), 101).unwrap();
        assert_eq!(curves.len(), 8);
        for c in &curves {
            for &(e, k) in &c.samples {
                let Some(k) = k.finite() else {
                    assert!(c.id == CurveId::Kplus);
                    continue;
                };
                match c.id {
                    CurveId::L0 => assert_eq!(e, 0.0),
                    CurveId::Lm1 => assert_eq!(k, zm - e),
                    CurveId::Lp2 => assert_eq!(k, -zp - e),
                    CurveId::Lm2 => assert_eq!(k, -zm - e),
                    CurveId::Lp3 => assert!((4.0 * e * k - zp * zp).abs() <= 1e-12 * zp * zp),
                    CurveId::Lm3 => assert!((4.0 * e * k - zm * zm).abs() <= 1e-12 * zm * zm),
                    CurveId::Kminus => assert_eq!(k, k_minus(&p, e)),
                    CurveId::Kplus => assert_eq!(Some(k), k_plus(&p, e).finite()),
                }
            }
        }
    }
}

#[test]
fn kplus_follows_critical_line_below_threshold() {
    let p = params(2.0, 4.0, 0.01);
    for e in [-5.0, -2.0, -1.0] {
        assert_eq!(k_plus(&p, e).finite(), curve_value(&p, CurveId::Lp2, e).and_then(|k| k.finite()));
    }
}

#[test]
fn kminus_hyperbola_passes_through_branch_point() {
    let p = params(2.0, 4.0, 0.01);
    let k = curve_value(&p, CurveId::Lm3, 2.0).unwrap().finite().unwrap();
    assert_eq!((k, 4.0 * 2.0 * k), (2.0, 16.0));
    let left = k_minus(&p, 2.0);
    let right = k_minus(&p, 2.0 + 1e-12);
    assert!((left - right).abs() < 1e-11);
}

#[test]
fn band_at_unit_energy() {
    let p = params(2.0, 4.0, 0.01);
    assert_eq!(k_plus(&p, 1.0), KValue::UnboundedBelow);
    assert_eq!(k_minus(&p, 1.0), 3.0);
}

#[test]
fn degenerate_range_rejected() {
    let p = params(2.0, 4.0, 0.01);
    assert!(bifurcation_diagram(&p, (1.0, 1.0), 10).is_err());
}

#[test]
fn barrier_top_balance_lands_on_critical_line() {
    let p = params(2.0, 4.0, 0.01);
    let e = 7.0;
    let energy = ComplexEnergy::from_energy(Complex64::new(e, 0.0)).unwrap();
    let rec = ResonanceRecord {
        n: 0,
        m: 0,
        energy,
        mu: Complex64::new(p.z_plus + e, 0.0),
        k_classical: 0.0,
        regime: Regime::HighEnergy,
        residual: 0.0,
        kind: ZeroKind::Resonance,
    };
    assert_eq!(estimate_k(&rec), -p.z_plus - e);
    assert!(critical_line_defect(&p, &rec) < 1e-15);
    assert_eq!(radial_constant(&p, e, 0.0, 0.0), -p.z_plus - e);
}

#[test]
fn high_energy_resonance_projection() {
    let p = params(2.0, 4.0, 0.001);
    let r = solve_high_energy(&p, 0, 4000).unwrap();
    assert!(critical_line_defect(&p, &r) <= 0.01);
}

#[test]
fn projection_defect_decreases_with_m() {
    let p = params(2.0, 4.0, 0.01);
    let d: Vec<f64> = (400..=430)
        .step_by(5)
        .map(|m| critical_line_defect(&p, &solve_high_energy(&p, 0, m).unwrap()))
        .collect();
    assert!(d.windows(2).all(|w| w[1] <= 1.1 * w[0]), "{d:?}");
    assert!(d.last().unwrap() < d.first().unwrap());
}

#[test]
fn renormalised_lattice_is_equispaced() {
    let p = params(2.0, 0.0, 0.001);
    for branch in [Branch::Small, Branch::Large] {
        let opts = SolveOptions { branch, ..Default::default() };
        let xs: Vec<f64> = (9000..=9010)
            .map(|m| {
                let e = solve_high_energy_with(&p, 0, m, opts).unwrap().energy.e;
                e.re / lyapunov_normalizer(e.re).unwrap()
            })
            .collect();
        let gaps: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let mean = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert!(gaps.iter().all(|g| (g - mean).abs() <= 0.05 * mean.abs()), "{gaps:?}");
    }
}
