//! Unified Transform solver for the modified Helmholtz equation `Δu - 4β²u = 0`
//! in the exterior of a convex polygon with Dirichlet data.
//!
//! Given the boundary values of `u`, the solver recovers the Neumann boundary values
//! (as Legendre expansions per side) and the scattering amplitude `f₀(φ)` (as a truncated
//! Fourier series) by collocating the exterior global relation together with the boundary
//! limits of the supplementary relation, and solving the resulting overdetermined system
//! in the least-squares sense.

pub mod contourquad;
pub mod error;
pub mod geometry;
pub mod quadrature;
pub mod reference;
pub mod solver;
pub mod specfun;
pub mod supplement;
pub mod transforms;

pub use error::{Error, Result};
pub use num_complex::Complex64;
