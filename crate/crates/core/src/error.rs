use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by geometry construction, quadrature and assembly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("polygon needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("side {side} is degenerate: consecutive vertices coincide")]
    DegenerateSide { side: usize },
    #[error("vertices are not in counterclockwise order")]
    WrongOrientation,
    #[error("polygon is not convex at vertex {vertex}")]
    NotConvex { vertex: usize },
    #[error("side index {index} out of range for a polygon with {sides} sides")]
    SideIndex { index: usize, sides: usize },
    #[error("Legendre order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("Bessel K requires a positive argument, got {0}")]
    NonPositiveArgument(f64),
    #[error("integrand does not decay at both ends of the ray at angle {angle}")]
    NoDecay { angle: f64 },
    #[error("pole at {pole} lies within {distance:.3e} of the ray at angle {angle}")]
    PoleOnRay { pole: Complex64, distance: f64, angle: f64 },
    #[error("pole at the origin cannot be indented")]
    PoleAtOrigin,
    #[error("more than one pole lies on the base ray")]
    TwoPolesOnRay,
    #[error("spectral parameter must be nonzero")]
    ZeroSpectralParameter,
    #[error("collocation parameter t0 = {t0} is too close to a corner")]
    CornerDegeneracy { t0: f64 },
    #[error("non-finite entry in assembled row {row}")]
    AssemblyNonFinite { row: usize },
    #[error("reference solution is singular at the origin")]
    OriginSingular,
    #[error("invalid collocation plan: {0}")]
    InvalidPlan(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
