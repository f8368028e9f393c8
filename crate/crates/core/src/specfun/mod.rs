//! Special functions: Legendre polynomials, Fourier-Legendre integrals and modified Bessel K.

mod bessel;
mod fourier_legendre;
mod legendre;

pub use bessel::{bessel_k, bessel_k_upto};
pub use fourier_legendre::{
    legendre_flat_integral, legendre_flat_integral_closed, legendre_flat_integral_scaled,
    legendre_flat_integral_series, legendre_moment, series_threshold,
    FourierLegendreCoeffs, MAX_ORDER,
};
pub use legendre::{legendre_eval, legendre_upto};
