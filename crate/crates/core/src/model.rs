//! Problem parameters, complex energies and resonance records.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Charges of the two centers (placed at ±1) and the semiclassical parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub z1: f64,
    pub z2: f64,
    pub h: f64,
    pub z_plus: f64,
    pub z_minus: f64,
    /// True when the input charges were exchanged to make `z_minus >= 0`.
    pub swapped: bool,
}

/// Checks the raw inputs and orders the charges so that `z2 >= z1`.
pub fn validate_params(z1: f64, z2: f64, h: f64) -> Result<ProblemParams> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidParams(format!("h must be positive, got {h}")));
    }
    if !z1.is_finite() || !z2.is_finite() {
        return Err(Error::InvalidParams("charges must be finite".into()));
    }
    if z1 == 0.0 || z2 == 0.0 {
        return Err(Error::InvalidParams("zero charge".into()));
    }
    let swapped = z2 < z1;
    let (a, b) = if swapped { (z2, z1) } else { (z1, z2) };
    let z_plus = b + a;
    let z_minus = b - a;
    if z_plus == z_minus {
        return Err(Error::InvalidParams("Z+ equals Z-".into()));
    }
    Ok(ProblemParams { z1: a, z2: b, h, z_plus, z_minus, swapped })
}

impl ProblemParams {
    /// Builds parameters from (Z+, Z-) directly; the charges are recovered as
    /// z2 = (Z+ + Z-)/2 and z1 = (Z+ - Z-)/2.
    pub fn from_sum_difference(z_plus: f64, z_minus: f64, h: f64) -> Result<Self> {
        let p = validate_params(0.5 * (z_plus - z_minus), 0.5 * (z_plus + z_minus), h)?;
        // keep the exact inputs rather than the re-summed charges
        Ok(ProblemParams { z_plus, z_minus: z_minus.abs(), ..p })
    }

    /// Copy with a different semiclassical parameter.
    pub fn with_h(&self, h: f64) -> Result<Self> {
        let mut p = validate_params(self.z1, self.z2, h)?;
        p.z_plus = self.z_plus;
        p.z_minus = self.z_minus;
        p.swapped = self.swapped;
        Ok(p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sheet {
    Physical,
    Second,
}

/// Energy paired with its momentum, `e = k^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexEnergy {
    pub e: Complex64,
    pub k: Complex64,
    pub sheet: Sheet,
}

/// `force_second` tags the result as second-sheet even when `Im k >= 0`
/// would put it on the physical sheet.
pub fn energy_from_k(k: Complex64, force_second: bool) -> Result<ComplexEnergy> {
    if k == Complex64::new(0.0, 0.0) {
        return Err(Error::InvalidParams("k = 0 is excluded".into()));
    }
    if !k.re.is_finite() || !k.im.is_finite() {
        return Err(Error::InvalidParams("k must be finite".into()));
    }
    let sheet = if force_second || k.im < 0.0 { Sheet::Second } else { Sheet::Physical };
    Ok(ComplexEnergy { e: k * k, k, sheet })
}

impl ComplexEnergy {
    /// Momentum with `Re k > 0` for a given energy; the sheet follows the sign of `Im k`.
    pub fn from_energy(e: Complex64) -> Result<Self> {
        let mut k = e.sqrt();
        if k.re < 0.0 {
            k = -k;
        }
        // a resonance energy (Im E < 0) continued from the positive axis
        if e.im < 0.0 && k.im > 0.0 {
            k = -k;
        }
        energy_from_k(k, false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    EqualCharges,
    LowLying,
    HighEnergy,
    DirectJost,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::EqualCharges => "equal_charges",
            Regime::LowLying => "low_lying",
            Regime::HighEnergy => "high_energy",
            Regime::DirectJost => "direct_jost",
        }
    }
}

/// Nature of a computed zero: a resonance (`Im E < 0`), its mirror image
/// under exchange of incoming and outgoing waves, or a bound state
/// (`Im k > 0` on the physical sheet).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroKind {
    Resonance,
    AntiResonance,
    Eigenvalue,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRecord {
    /// Barrier-top (radial) quantum number.
    pub n: usize,
    /// Angular quantum number.
    pub m: usize,
    pub energy: ComplexEnergy,
    pub mu: Complex64,
    pub k_classical: f64,
    pub regime: Regime,
    pub residual: f64,
    pub kind: ZeroKind,
}
