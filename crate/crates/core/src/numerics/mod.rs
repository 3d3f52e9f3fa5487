//! Reusable numerical kernels: adaptive quadrature, substitution wrappers,
//! bracketed root finding and Richardson differentiation.
//!
//! Everything here is stateless and re-entrant; identical inputs give
//! bit-identical outputs regardless of concurrent context.

pub mod diff;
pub mod quad;
pub mod root;

pub use diff::differentiate_richardson;
pub use quad::{
    integrate_adaptive, integrate_line, integrate_semiinf, integrate_sqrt_origin, QuadResult,
    QuadValue, Tol,
};
pub use root::find_root_bracketed;
