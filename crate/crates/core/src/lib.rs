//! Thermal Casimir physics of the TE channel between Drude mirrors:
//! dispersion-function evaluation on and off the real frequency axis,
//! integrated mode counts and mode densities for the full (Lifshitz),
//! eddy-current and propagating channels, free energy / entropy / pressure
//! along independent numerical routes, and low-temperature expansion
//! coefficients — all with propagated quadrature error estimates.

pub mod curve;
pub mod eddy;
pub mod error;
pub mod lifshitz;
pub mod material;
pub mod numerics;
pub mod thermo;
pub mod units;
pub mod validation;

pub use curve::{Channel, CurveKind, SpectralCurve};
pub use error::{CoreError, Result};
pub use material::{Cavity, DrudeMaterial, Freq};
pub use numerics::{QuadResult, Tol};
