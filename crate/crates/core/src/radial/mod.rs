//! Radial equation `v'' + h^-2 (k^2 cosh^2 xi + Z+ cosh xi - mu) v = 0`:
//! phase function, distinguished solutions, Jost functions and Green's
//! functions.

mod green;
mod phase;
mod riccati;
mod taylor;
mod waves;

pub use green::{radial_green, truncated_green_2d, truncated_green_terms};
pub use phase::{phase, PhaseForm, PhaseFunction};
pub use waves::{
    asymptotic_ratio, default_ray_angle, incoming_wave, jost, jost_plus, jost_with_rays, outgoing_wave,
    regular_wave, rotated_wave, JostData, WaveKind, WaveSample, WaveSolution,
};
