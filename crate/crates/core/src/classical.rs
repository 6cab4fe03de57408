//! Classical bifurcation set in the `(E, K)` plane and the maps used to
//! compare resonances with it.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::model::{ProblemParams, ResonanceRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CurveId {
    L0,
    Lm1,
    Lp2,
    Lm2,
    Lp3,
    Lm3,
    Kplus,
    Kminus,
}

impl CurveId {
    pub const ALL: [CurveId; 8] = [
        CurveId::L0,
        CurveId::Lm1,
        CurveId::Lp2,
        CurveId::Lm2,
        CurveId::Lp3,
        CurveId::Lm3,
        CurveId::Kplus,
        CurveId::Kminus,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            CurveId::L0 => "L0",
            CurveId::Lm1 => "Lm1",
            CurveId::Lp2 => "Lp2",
            CurveId::Lm2 => "Lm2",
            CurveId::Lp3 => "Lp3",
            CurveId::Lm3 => "Lm3",
            CurveId::Kplus => "Kplus",
            CurveId::Kminus => "Kminus",
        }
    }
}

/// A value of `K`, possibly the lower bound `-inf` of the band for `E > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum KValue {
    Finite(f64),
    UnboundedBelow,
}

impl KValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            KValue::Finite(k) => Some(*k),
            KValue::UnboundedBelow => None,
        }
    }
}

impl std::fmt::Display for KValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KValue::Finite(k) => write!(f, "{k}"),
            KValue::UnboundedBelow => f.write_str("unbounded"),
        }
    }
}

impl Serialize for KValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            KValue::Finite(k) => s.serialize_f64(*k),
            KValue::UnboundedBelow => s.serialize_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BifurcationCurve {
    pub id: CurveId,
    pub samples: Vec<(f64, KValue)>,
}

/// Upper edge of the band of admissible `K`.
pub fn k_minus(params: &ProblemParams, e: f64) -> f64 {
    let zm = params.z_minus;
    if e <= 0.5 * zm {
        zm - e
    } else {
        zm * zm / (4.0 * e)
    }
}

/// Lower edge of the band of admissible `K`.
pub fn k_plus(params: &ProblemParams, e: f64) -> KValue {
    let zp = params.z_plus;
    if e > 0.0 {
        KValue::UnboundedBelow
    } else if e <= (-0.5 * zp).min(0.0) {
        KValue::Finite(-(zp + e))
    } else if e == 0.0 {
        KValue::UnboundedBelow
    } else {
        KValue::Finite(zp * zp / (4.0 * e))
    }
}

/// `K` on the curve `id` at energy `e`; `None` where the curve has no
/// point (`E = 0` on the hyperbolas) or is the vertical line `L0`.
pub fn curve_value(params: &ProblemParams, id: CurveId, e: f64) -> Option<KValue> {
    let (zp, zm) = (params.z_plus, params.z_minus);
    let fin = |k: f64| Some(KValue::Finite(k));
    match id {
        CurveId::L0 => None,
        CurveId::Lm1 => fin(zm - e),
        CurveId::Lp2 => fin(-zp - e),
        CurveId::Lm2 => fin(-zm - e),
        CurveId::Lp3 if e != 0.0 => fin(zp * zp / (4.0 * e)),
        CurveId::Lm3 if e != 0.0 => fin(zm * zm / (4.0 * e)),
        CurveId::Lp3 | CurveId::Lm3 => None,
        CurveId::Kplus => Some(k_plus(params, e)),
        CurveId::Kminus => fin(k_minus(params, e)),
    }
}

/// All eight curves sampled on `samples` equispaced energies of
/// `e_range`. `L0` is sampled along `K` over the span of the other curves.
pub fn bifurcation_diagram(params: &ProblemParams, e_range: (f64, f64), samples: usize) -> Result<Vec<BifurcationCurve>> {
    let (a, b) = e_range;
    if !(b > a) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParams(format!("degenerate energy range [{a}, {b}]")));
    }
    if samples < 2 {
        return Err(Error::InvalidParams("need at least two samples".into()));
    }
    let es: Vec<f64> = (0..samples).map(|i| a + (b - a) * i as f64 / (samples - 1) as f64).collect();
    let mut curves: Vec<BifurcationCurve> = CurveId::ALL[1..]
        .iter()
        .map(|&id| BifurcationCurve {
            id,
            samples: es.iter().filter_map(|&e| curve_value(params, id, e).map(|k| (e, k))).collect(),
        })
        .collect();
    let (kmin, kmax) = curves
        .iter()
        .filter(|c| matches!(c.id, CurveId::Lm1 | CurveId::Lp2 | CurveId::Lm2 | CurveId::Kminus))
        .flat_map(|c| c.samples.iter().filter_map(|s| s.1.finite()))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), k| (lo.min(k), hi.max(k)));
    let l0 = (0..samples)
        .map(|i| (0.0, KValue::Finite(kmin + (kmax - kmin) * i as f64 / (samples - 1) as f64)))
        .collect();
    curves.insert(0, BifurcationCurve { id: CurveId::L0, samples: l0 });
    Ok(curves)
}

/// Classical constant attached to a resonance: `K = -Re mu`.
pub fn estimate_k(record: &ResonanceRecord) -> f64 {
    -record.mu.re
}

/// Distance of a resonance from the line `K = -Z+ - E`, relative to `|K|`.
pub fn critical_line_defect(params: &ProblemParams, record: &ResonanceRecord) -> f64 {
    let k = estimate_k(record);
    (k + params.z_plus + record.energy.e.re).abs() / k.abs()
}

/// Radial function `p^2 - Z+ cosh xi - E cosh^2 xi`, constant along a
/// classical trajectory.
pub fn radial_constant(params: &ProblemParams, e: f64, xi: f64, p_xi: f64) -> f64 {
    let ch = xi.cosh();
    p_xi * p_xi - params.z_plus * ch - e * ch * ch
}

/// Growth rate `sqrt(E) ln E` of the Lyapunov exponent of the bouncing orbit.
pub fn lyapunov_normalizer(e: f64) -> Result<f64> {
    if !(e > 1.0) {
        return Err(Error::InvalidParams(format!("normalizer needs E > 1, got {e}")));
    }
    Ok(e.sqrt() * e.ln())
}
