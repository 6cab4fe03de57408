//! Small numerical building blocks: quadrature, an extrapolation ODE
//! integrator, truncated power series and scalar root finders.

pub mod band;
pub mod bs;
pub mod jet;
pub mod quad;
pub mod roots;
