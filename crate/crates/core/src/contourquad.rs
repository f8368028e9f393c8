//! Integrals along rays in the complex λ-plane for kernels of the form
//! `exp(iβ(aλ + b/λ)) · [iβ(λh + conj(h)/λ)] / (λh - conj(h)/λ)^q` with measure `dλ/λ`.
//!
//! Rays are parametrized as `λ = e^{iθ} e^s`, which turns `dλ/λ` into `ds` and the
//! double-exponential decay of the kernels into rapid decay in `s`, so the uniform
//! trapezoid rule converges exponentially.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::reduce_angle;
use crate::quadrature::adaptive_kronrod;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Exponent level below which the integrand counts as decayed at the truncation points.
pub const DECAY_FLOOR: f64 = -30.0;

/// Environment variable overriding the quadrature tolerance.
pub const TOLERANCE_ENV: &str = "UT_QUAD_TOL";

/// Truncation and resolution parameters shared by all contour integrals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadParams {
    /// Trapezoid step in `s = ln|λ|`.
    pub step: f64,
    /// The grid covers `s ∈ [-half_width, half_width]`.
    pub half_width: f64,
    /// Target accuracy for adaptive rules and self-convergence checks.
    pub tolerance: f64,
    /// Radius of the semicircular detour around an on-ray pole.
    pub indent_radius: f64,
    pub residue_radius: f64,
    pub residue_points: usize,
    /// Radial truncation `[inner, outer]` of the indented base-ray oracle.
    pub oracle_inner: f64,
    pub oracle_outer: f64,
}

impl Default for QuadParams {
    fn default() -> Self {
        Self {
            step: 0.05,
            half_width: 8.0,
            tolerance: 1e-10,
            indent_radius: 0.25,
            residue_radius: 0.5,
            residue_points: 128,
            oracle_inner: 1e-3,
            oracle_outer: 1e3,
        }
    }
}

impl QuadParams {
    /// Parameters whose trapezoid step is sized for the requested tolerance, assuming the
    /// nearest singularity sits at least `π/8` away from the ray in the strip `Im s`.
    pub fn for_tolerance(tolerance: f64) -> Self {
        let tol = tolerance.clamp(1e-16, 0.5);
        let step = 2.0 * PI * (PI / 8.0) / (1.0 / tol).ln();
        Self { step, tolerance: tol, ..Self::default() }
    }

    /// Defaults, or [`QuadParams::for_tolerance`] when `UT_QUAD_TOL` holds a number.
    pub fn from_env() -> Self {
        std::env::var(TOLERANCE_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<f64>().ok())
            .filter(|t| t.is_finite() && *t > 0.0)
            .map(Self::for_tolerance)
            .unwrap_or_default()
    }

    /// Number of trapezoid nodes on each side of `s = 0`.
    pub fn nodes_per_side(&self) -> i64 {
        (self.half_width / self.step).round() as i64
    }

    /// The trapezoid abscissae `s_k`.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let k = self.nodes_per_side();
        (-k..=k).map(move |i| i as f64 * self.step)
    }
}

/// A kernel `g(λ)` integrated against `dλ/λ`:
/// `g = exp(iβ(aλ + b/λ)) · P(λ) / D(λ)^power`, with `D = λh - conj(h)/λ` and
/// `P = iβ(λh + conj(h)/λ)` when `prefactor` is set, `P = 1` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelIntegrand {
    pub beta: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub halfside: Complex64,
    pub power: u32,
    pub prefactor: bool,
}

impl KernelIntegrand {
    /// The kernel with exponent `iβ(wλ - conj(w)/λ)` and denominator power `p + 1`.
    pub fn q_kernel(beta: f64, w: Complex64, halfside: Complex64, p: u32, prefactor: bool) -> Self {
        Self { beta, a: w, b: -w.conj(), halfside, power: p + 1, prefactor }
    }

    pub fn exponent(&self, lambda: Complex64) -> Complex64 {
        I * self.beta * (self.a * lambda + self.b / lambda)
    }

    /// `g(λ)`; the integral of interest is `∫ g(λ) dλ/λ`.
    pub fn value(&self, lambda: Complex64) -> Complex64 {
        let h = self.halfside;
        let mut g = self.exponent(lambda).exp();
        if self.prefactor {
            g *= I * self.beta * (lambda * h + h.conj() / lambda);
        }
        if self.power > 0 {
            g /= (lambda * h - h.conj() / lambda).powu(self.power);
        }
        g
    }

    /// Poles of `g`: the roots of `λ²h = conj(h)` when a denominator is present.
    pub fn poles(&self) -> Vec<Complex64> {
        if self.power == 0 {
            return Vec::new();
        }
        let z = Complex64::from_polar(1.0, -self.halfside.arg());
        vec![z, -z]
    }

    /// Real part of the exponent at both truncation points of the ray at angle `theta`.
    pub fn edge_decay(&self, theta: f64, quad: &QuadParams) -> f64 {
        let s = quad.nodes_per_side() as f64 * quad.step;
        let lo = self.exponent(Complex64::from_polar((-s).exp(), theta)).re;
        let hi = self.exponent(Complex64::from_polar(s.exp(), theta)).re;
        lo.max(hi)
    }
}

/// Which side of the direction of travel an indentation passes an on-ray pole.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DetourSide {
    /// The clockwise side, to the right when moving outward along the ray.
    #[default]
    Right,
    /// The counterclockwise side.
    Left,
}

impl DetourSide {
    pub fn flipped(self) -> Self {
        match self {
            Self::Right => Self::Left,
            Self::Left => Self::Right,
        }
    }
}

/// A base ray with an indentation around its pole and the deformed ray actually integrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPlan {
    pub base_angle: f64,
    pub deformed_angle: f64,
    pub detour: DetourSide,
    pub indent_radius: f64,
    pub step: f64,
    pub half_width: f64,
}

impl ContourPlan {
    pub fn new(base_angle: f64, deformed_angle: f64, detour: DetourSide, quad: &QuadParams) -> Result<Self> {
        let plan = Self {
            base_angle,
            deformed_angle,
            detour,
            indent_radius: quad.indent_radius,
            step: quad.step,
            half_width: quad.half_width,
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Signed sweep from the base ray to the deformed ray, in `(-π, π]`.
    pub fn sweep(&self) -> f64 {
        reduce_angle(self.deformed_angle - self.base_angle)
    }

    pub fn validate(&self) -> Result<()> {
        if self.sweep().abs() > PI / 2.0 + 1e-12 {
            return Err(Error::InvalidPlan(format!(
                "deformation by {:.4} rad exceeds a quarter turn",
                self.sweep()
            )));
        }
        // the two kernel poles are antipodal on the unit circle
        if !(self.indent_radius > 0.0 && self.indent_radius < 0.5) {
            return Err(Error::InvalidPlan(format!("indent radius {} not in (0, 0.5)", self.indent_radius)));
        }
        Ok(())
    }
}

fn distance_to_ray(p: Complex64, theta: f64) -> f64 {
    let along = reduce_angle(p.arg() - theta);
    if along.abs() < PI / 2.0 {
        p.norm() * along.sin().abs()
    } else {
        p.norm()
    }
}

/// Trapezoid rule for `∫ g(λ) dλ/λ` along `λ = e^{iθ}e^s`, `s ∈ [s_min, s_max]`, without checks.
pub fn ray_integral_with<G>(g: G, theta: f64, step: f64, s_min: f64, s_max: f64) -> Complex64
where
    G: Fn(Complex64) -> Complex64,
{
    let k0 = (s_min / step).ceil() as i64;
    let k1 = (s_max / step).floor() as i64;
    let dir = Complex64::from_polar(1.0, theta);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in k0..=k1 {
        sum += g(dir * (k as f64 * step).exp());
    }
    sum * step
}

/// `∫_0^{∞e^{iθ}} g(λ) dλ/λ` for a kernel that decays at both ends of the ray.
pub fn ray_integral(f: &KernelIntegrand, theta: f64, quad: &QuadParams) -> Result<Complex64> {
    if f.edge_decay(theta, quad) > DECAY_FLOOR {
        return Err(Error::NoDecay { angle: theta });
    }
    for pole in f.poles() {
        let distance = distance_to_ray(pole, theta);
        if distance < quad.indent_radius {
            return Err(Error::PoleOnRay { pole, distance, angle: theta });
        }
    }
    let s = quad.nodes_per_side() as f64 * quad.step;
    Ok(ray_integral_with(|l| f.value(l), theta, quad.step, -s, s))
}

/// `(1/2πi) ∮ f(λ) dλ` over the circle `|λ - center| = radius` by the `points`-point trapezoid rule.
pub fn circle_residue<F>(f: F, center: Complex64, radius: f64, points: usize) -> Complex64
where
    F: Fn(Complex64) -> Complex64,
{
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..points {
        let e = Complex64::from_polar(radius, 2.0 * PI * k as f64 / points as f64);
        sum += f(center + e) * e;
    }
    sum / points as f64
}

/// Residue of `g(λ)/λ` at `pole`.
pub fn kernel_residue(f: &KernelIntegrand, pole: Complex64, quad: &QuadParams) -> Complex64 {
    circle_residue(|l| f.value(l) / l, pole, quad.residue_radius, quad.residue_points)
}

/// Multiplier (`+1`, `-1` or `0`) of `2πi·Res` for a pole when the indented base ray at
/// `theta0` is rotated to `theta1`.
pub fn crossing_sign(pole: Complex64, theta0: f64, theta1: f64, detour: DetourSide) -> f64 {
    let sweep = reduce_angle(theta1 - theta0);
    let at = reduce_angle(pole.arg() - theta0);
    if at.abs() < 1e-9 {
        return match detour {
            DetourSide::Right if sweep > 0.0 => 1.0,
            DetourSide::Left if sweep < 0.0 => -1.0,
            _ => 0.0,
        };
    }
    if sweep > 0.0 && at > 0.0 && at < sweep {
        1.0
    } else if sweep < 0.0 && at < 0.0 && at > sweep {
        -1.0
    } else {
        0.0
    }
}

/// The integral over the indented base ray at `theta0`, evaluated along `theta1`
/// plus the residues of the poles swept in between.
pub fn deformed_integral_with_crossing(
    f: &KernelIntegrand,
    theta0: f64,
    theta1: f64,
    detour: DetourSide,
    quad: &QuadParams,
) -> Result<Complex64> {
    let mut value = ray_integral(f, theta1, quad)?;
    for pole in f.poles() {
        let sign = crossing_sign(pole, theta0, theta1, detour);
        if sign != 0.0 {
            value += 2.0 * PI * I * sign * kernel_residue(f, pole, quad);
        }
    }
    Ok(value)
}

/// Brute-force evaluation on the base ray itself, with a semicircular detour of radius `ε`
/// around an on-ray pole, radial truncation to `[oracle_inner, oracle_outer]` and
/// first-order integration-by-parts corrections for both truncated tails.
///
/// Slow and only moderately accurate; intended as an independent check of
/// [`deformed_integral_with_crossing`].
pub fn indented_ray_integral(f: &KernelIntegrand, plan: &ContourPlan, quad: &QuadParams) -> Result<Complex64> {
    plan.validate()?;
    let theta = plan.base_angle;
    let eps = plan.indent_radius;
    let dir = Complex64::from_polar(1.0, theta);
    let mut on_ray = None;
    for pole in f.poles() {
        if pole.norm() < eps {
            return Err(Error::PoleAtOrigin);
        }
        if distance_to_ray(pole, theta) < 1e-9 * pole.norm() {
            if on_ray.is_some() {
                return Err(Error::TwoPolesOnRay);
            }
            on_ray = Some(pole);
        }
    }
    let (r_in, r_out) = (quad.oracle_inner, quad.oracle_outer);
    let tol = quad.tolerance.max(1e-12);
    let radial = |lo: f64, hi: f64| -> Complex64 {
        adaptive_kronrod(|s, out| out[0] = f.value(dir * s.exp()), lo.ln(), hi.ln(), 1, tol, 200_000)[0]
    };
    let mut value = Complex64::new(0.0, 0.0);
    match on_ray {
        Some(pole) => {
            let rho = pole.norm();
            value += radial(r_in, rho - eps);
            value += radial(rho + eps, r_out);
            let (lo, hi, sign) = match plan.detour {
                DetourSide::Right => (theta - PI, theta, 1.0),
                DetourSide::Left => (theta, theta + PI, -1.0),
            };
            let arc = adaptive_kronrod(
                |phi, out| {
                    let e = Complex64::from_polar(eps, phi);
                    let l = pole + e;
                    out[0] = f.value(l) / l * I * e;
                },
                lo,
                hi,
                1,
                tol,
                10_000,
            )[0];
            value += arc * sign;
        }
        None => value += radial(r_in, r_out),
    }
    let slope = |rho: f64| I * f.beta * (f.a * dir - f.b / (dir * rho * rho));
    let l_out = dir * r_out;
    let l_in = dir * r_in;
    value += -f.value(l_out) / (r_out * slope(r_out));
    value += f.value(l_in) / (r_in * slope(r_in));
    Ok(value)
}
