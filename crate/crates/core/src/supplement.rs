//! Boundary limits of the supplementary relation.
//!
//! For `z` inside the polygon, `Σ_j ∫_{l̂_j} e^{iβ(λz - conj(z)/λ)} û_j(λ) dλ/λ = 0`. Letting `z`
//! approach a boundary point `z₀` gives one linear equation per collocation point:
//! `Σ_{j,m} c_m^{(j)} i E_m^{(j)}(z₀) + u^D(z₀) = 0`, where
//! `E_m^{(j)}(z) = ∫_{l̂_j} e^{iβ(λ(z - m_j) - conj(z - m_j)/λ)} F_m(Λ_j) dλ/λ` and `u^D` collects
//! the same integrals weighted by the Dirichlet data and the factor `iβ(λh_j + conj(h_j)/λ)`.
//!
//! Two evaluation routes are provided:
//!
//! * [`KernelRoute::Direct`] integrates `F_m` unsplit along a single ray per side. The
//!   singularities of `F_m(Λ)/Λ^{p+1}` pieces cancel, so no indentation is needed. On the
//!   collocation side itself the λ-integral is done analytically, giving
//!   `∫ P_m(t) 2K₀(2β|h||t₀ - t|) dt` and, with the factor, the jump `2πi P_m(t₀)`.
//! * [`KernelRoute::Split`] expands `F_m` into `Q^±_p` kernels, each integrated on a rotated
//!   ray with residue corrections. Mathematically identical, but the cancellation between
//!   `A_mp` and `B_mp` terms limits it to moderate `m`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contourquad::{
    deformed_integral_with_crossing, ContourPlan, DetourSide, KernelIntegrand, QuadParams, DECAY_FLOOR,
};
use crate::error::{Error, Result};
use crate::geometry::{reduce_angle, PolygonGeometry, SidePoint};
use crate::quadrature::tanh_sinh;
use crate::specfun::{bessel_k, legendre_flat_integral_scaled, legendre_upto, FourierLegendreCoeffs};
use crate::transforms::{DirichletData, NeumannCoefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Minimum distance of a collocation parameter from the corners `t = ±1`.
pub const CORNER_GAP: f64 = 0.01;

/// How the kernel integrals of the supplementary relation are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KernelRoute {
    #[default]
    Direct,
    Split { detour: DetourSide },
}

/// Where the supplementary relation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalPoint {
    Boundary(SidePoint),
    Interior(Complex64),
}

impl EvalPoint {
    pub fn z(&self) -> Complex64 {
        match self {
            Self::Boundary(p) => p.z,
            Self::Interior(z) => *z,
        }
    }

    fn side(&self) -> Option<usize> {
        match self {
            Self::Boundary(p) => Some(p.side),
            Self::Interior(_) => None,
        }
    }

    fn check(&self, geom: &PolygonGeometry) -> Result<()> {
        match self {
            Self::Boundary(p) => {
                if p.t.abs() > 1.0 - CORNER_GAP {
                    return Err(Error::CornerDegeneracy { t0: p.t });
                }
                geom.ray_angle(p.side).map(|_| ())
            }
            Self::Interior(z) => {
                if geom.contains(*z) {
                    Ok(())
                } else {
                    Err(Error::InvalidParameter(format!("{z} is not inside the polygon")))
                }
            }
        }
    }
}

/// One `Q^σ_{pj}` integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QKernelRequest {
    pub p: u32,
    pub side: usize,
    pub at: EvalPoint,
    /// `+1` or `-1`.
    pub sigma: i8,
    /// Include the factor `iβ(λh_j + conj(h_j)/λ)`.
    pub prefactor: bool,
}

/// `w = z - m_j + σh_j`, the phase of `Q^σ_{pj}`.
pub fn q_phase(geom: &PolygonGeometry, req: &QKernelRequest) -> Result<Complex64> {
    let m = geom.midpoint(req.side)?;
    let h = geom.halfside(req.side)?;
    Ok(req.at.z() - m + h * f64::from(req.sigma))
}

/// Angle in the decay sector of `e^{iβ(λw - conj(w)/λ)}` that stays as far as possible from
/// both the sector edges and the pole line through `base`.
pub fn deformation_angle(w: Complex64, base: f64) -> f64 {
    let lo = -w.arg();
    let n = 1440;
    let mut best = (f64::NEG_INFINITY, lo + PI / 2.0);
    for k in 1..n {
        let th = lo + PI * k as f64 / n as f64;
        let margin = (th - lo).min(lo + PI - th);
        let d = reduce_angle(th - base).abs();
        let score = margin.min(d.min(PI - d));
        if score > best.0 + 1e-12 {
            best = (score, th);
        }
    }
    reduce_angle(best.1)
}

/// The kernel and contour plan used for a `Q` request.
pub fn q_setup(
    geom: &PolygonGeometry,
    beta: f64,
    req: &QKernelRequest,
    detour: DetourSide,
    quad: &QuadParams,
) -> Result<(KernelIntegrand, ContourPlan)> {
    req.at.check(geom)?;
    let w = q_phase(geom, req)?;
    let h = geom.halfside(req.side)?;
    let kernel = KernelIntegrand::q_kernel(beta, w, h, req.p, req.prefactor);
    let base = geom.ray_angle(req.side)?;
    let plan = ContourPlan::new(base, deformation_angle(w, base), detour, quad)?;
    Ok((kernel, plan))
}

/// `Q^σ_{pj}(z)` on the deformed contour, with the default detour convention.
pub fn q_integral(geom: &PolygonGeometry, beta: f64, req: &QKernelRequest, quad: &QuadParams) -> Result<Complex64> {
    q_integral_with(geom, beta, req, DetourSide::Right, quad)
}

/// `Q^σ_{pj}(z)` for the indented contour passing its pole on `detour`.
pub fn q_integral_with(
    geom: &PolygonGeometry,
    beta: f64,
    req: &QKernelRequest,
    detour: DetourSide,
    quad: &QuadParams,
) -> Result<Complex64> {
    let (kernel, plan) = q_setup(geom, beta, req, detour, quad)?;
    deformed_integral_with_crossing(&kernel, plan.base_angle, plan.deformed_angle, detour, quad)
}

/// `E_m^{(j)}(z)` for `m = 0..=max_mode`, optionally with the Dirichlet factor.
#[allow(clippy::too_many_arguments)]
pub fn side_entries(
    geom: &PolygonGeometry,
    beta: f64,
    j: usize,
    at: &EvalPoint,
    max_mode: usize,
    prefactor: bool,
    quad: &QuadParams,
    route: KernelRoute,
) -> Result<Vec<Complex64>> {
    at.check(geom)?;
    match route {
        KernelRoute::Direct => direct_entries(geom, beta, j, at, max_mode, prefactor, quad),
        KernelRoute::Split { detour } => split_entries(geom, beta, j, at, max_mode, prefactor, quad, detour),
    }
}

#[allow(clippy::too_many_arguments)]
fn split_entries(
    geom: &PolygonGeometry,
    beta: f64,
    j: usize,
    at: &EvalPoint,
    max_mode: usize,
    prefactor: bool,
    quad: &QuadParams,
    detour: DetourSide,
) -> Result<Vec<Complex64>> {
    let mut q = [Vec::new(), Vec::new()];
    for (slot, sigma) in [(0, 1i8), (1, -1i8)] {
        for p in 0..=max_mode as u32 {
            let req = QKernelRequest { p, side: j, at: *at, sigma, prefactor };
            q[slot].push(q_integral_with(geom, beta, &req, detour, quad)?);
        }
    }
    (0..=max_mode)
        .map(|m| {
            let f = FourierLegendreCoeffs::new(m)?;
            Ok((0..=m)
                .map(|p| (f.a()[p] * q[0][p] + f.b()[p] * q[1][p]) / beta.powi(p as i32 + 1))
                .sum())
        })
        .collect()
}

fn direct_entries(
    geom: &PolygonGeometry,
    beta: f64,
    j: usize,
    at: &EvalPoint,
    max_mode: usize,
    prefactor: bool,
    quad: &QuadParams,
) -> Result<Vec<Complex64>> {
    let h = geom.halfside(j)?;
    if let (Some(side), EvalPoint::Boundary(p)) = (at.side(), at) {
        if side == j {
            return Ok(if prefactor {
                legendre_upto(max_mode, p.t).into_iter().map(|v| 2.0 * PI * I * v).collect()
            } else {
                self_entries(beta * h.norm(), p.t, max_mode, quad)?
            });
        }
    }
    let z = at.z();
    let m0 = geom.midpoint(j)?;
    let w0 = z - m0;
    let wp = w0 + h;
    let wm = w0 - h;
    let theta = common_angle(wp, wm).ok_or(Error::NoDecay { angle: geom.ray_angle(j)? })?;
    let dir = Complex64::from_polar(1.0, theta);
    let phase = |w: Complex64, l: Complex64| I * beta * (w * l - w.conj() / l);
    let s_max = quad.nodes_per_side() as f64 * quad.step;
    for s in [-s_max, s_max] {
        let l = dir * s.exp();
        if phase(wp, l).re.max(phase(wm, l).re) > DECAY_FLOOR {
            return Err(Error::NoDecay { angle: theta });
        }
    }
    let mut out = vec![ZERO; max_mode + 1];
    for s in quad.grid() {
        let l = dir * s.exp();
        let big = (l * h - h.conj() / l) * beta;
        let shift = phase(w0, l);
        let weight = if prefactor { I * beta * (l * h + h.conj() / l) } else { Complex64::new(1.0, 0.0) };
        for (m, o) in out.iter_mut().enumerate() {
            *o += weight * legendre_flat_integral_scaled(big, m, shift);
        }
    }
    Ok(out.into_iter().map(|v| v * quad.step).collect())
}

/// Midpoint of the intersection of the decay sectors of the phases `wp` and `wm`.
fn common_angle(wp: Complex64, wm: Complex64) -> Option<f64> {
    let lo1 = -wp.arg();
    let lo2 = lo1 + reduce_angle(-wm.arg() - lo1);
    let lo = lo1.max(lo2);
    let hi = lo1.min(lo2) + PI;
    (hi - lo > 1e-6).then(|| reduce_angle(0.5 * (lo + hi)))
}

/// `∫ P_m(t) 2K₀(κ|t₀ - t|) dt` with `κ = 2β|h|`, split at the logarithmic singularity.
fn self_entries(beta_h: f64, t0: f64, max_mode: usize, quad: &QuadParams) -> Result<Vec<Complex64>> {
    let kappa = 2.0 * beta_h;
    let mut err = None;
    let mut integrand = |t: f64, dist: f64, out: &mut [f64]| {
        let k = match bessel_k(0, kappa * dist) {
            Ok(k) => k,
            Err(e) => {
                err = Some(e);
                0.0
            }
        };
        for (o, p) in out.iter_mut().zip(legendre_upto(max_mode, t)) {
            *o = 2.0 * k * p;
        }
    };
    let tol = quad.tolerance.min(1e-10);
    let left = tanh_sinh(|t, _, dr, out| integrand(t, dr, out), -1.0, t0, max_mode + 1, tol);
    let right = tanh_sinh(|t, dl, _, out| integrand(t, dl, out), t0, 1.0, max_mode + 1, tol);
    if let Some(e) = err {
        return Err(e);
    }
    Ok(left.iter().zip(&right).map(|(a, b)| Complex64::new(a + b, 0.0)).collect())
}

/// Coefficients of `c_m^{(j)}` (side-major) in the boundary-limit equation at `at`.
pub fn side_limit_row(
    geom: &PolygonGeometry,
    beta: f64,
    at: &SidePoint,
    max_mode: usize,
    quad: &QuadParams,
    route: KernelRoute,
) -> Result<Vec<Complex64>> {
    let point = EvalPoint::Boundary(*at);
    let mut row = Vec::with_capacity(geom.sides() * (max_mode + 1));
    for j in 0..geom.sides() {
        let e = side_entries(geom, beta, j, &point, max_mode, false, quad, route)?;
        row.extend(e.into_iter().map(|v| I * v));
    }
    Ok(row)
}

/// The known Dirichlet contribution `u^D` at `at`.
pub fn u_dirichlet_field(
    geom: &PolygonGeometry,
    beta: f64,
    at: &EvalPoint,
    data: &DirichletData,
    quad: &QuadParams,
    route: KernelRoute,
) -> Result<Complex64> {
    let mut total = ZERO;
    for j in 0..geom.sides() {
        let e = side_entries(geom, beta, j, at, data.max_mode(), true, quad, route)?;
        total += e.iter().zip(data.side(j)).map(|(e, d)| e * d).sum::<Complex64>();
    }
    Ok(total)
}

/// Value of the supplementary relation at `at` for given Dirichlet and Neumann data;
/// vanishes for the traces of a true exterior solution.
pub fn supplementary_relation(
    geom: &PolygonGeometry,
    beta: f64,
    at: &EvalPoint,
    data: &DirichletData,
    neumann: &NeumannCoefficients,
    quad: &QuadParams,
    route: KernelRoute,
) -> Result<Complex64> {
    let mut total = u_dirichlet_field(geom, beta, at, data, quad, route)?;
    for j in 0..geom.sides() {
        let e = side_entries(geom, beta, j, at, neumann.max_mode(), false, quad, route)?;
        total += I * e.iter().zip(neumann.side(j)).map(|(e, c)| e * c).sum::<Complex64>();
    }
    Ok(total)
}
