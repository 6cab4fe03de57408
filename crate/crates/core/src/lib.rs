//! Quantum resonances of the planar two-center Coulomb problem.
//!
//! The Schrödinger operator separates in elliptic coordinates into an
//! angular Hill equation (spectral parameter `mu`) and a radial equation
//! whose Jost function vanishes at resonances. The crate provides both
//! spectral problems, the barrier-top resonance equations and the
//! classical bifurcation set used to interpret the results.

pub mod angular;
pub mod classical;
pub mod error;
pub mod model;
pub mod numerics;
pub mod prufer;
pub mod radial;
pub mod resonances;

pub use error::{Error, Result};
pub use model::{
    energy_from_k, validate_params, ComplexEnergy, ProblemParams, Regime, ResonanceRecord, Sheet,
    ZeroKind,
};
