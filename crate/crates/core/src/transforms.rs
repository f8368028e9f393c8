//! Side transforms, the amplitude parametrization and the global relations.
//!
//! For side `j` with `Λ = β(λh_j - conj(h_j)/λ)` the transforms are
//!
//! * Dirichlet part: `iβ(conj(h_j)/λ + λh_j) e^{-iβ(λm_j - conj(m_j)/λ)} Σ d_m F_m(Λ)`
//! * Neumann part: `i e^{-iβ(λm_j - conj(m_j)/λ)} Σ c_m F_m(Λ)`
//!
//! where `F_m(Λ) = ∫ e^{-iΛx} P_m(x) dx` and the Neumann values are the outward normal
//! derivative scaled by `|h_j|`. Summed counterclockwise over the sides they equal
//! `I(λ) = -4 f₀(i ln(-iλ))` for an outgoing exterior solution, and zero for a solution
//! regular inside the polygon.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::PolygonGeometry;
use crate::quadrature::gauss_legendre;
use crate::specfun::{legendre_flat_integral_scaled, legendre_upto};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Legendre coefficients of the Dirichlet data, one vector per side, all of length `M_D + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletData {
    coeffs: Vec<Vec<Complex64>>,
}

impl DirichletData {
    pub fn new(coeffs: Vec<Vec<Complex64>>) -> Result<Self> {
        let len = coeffs.first().map(Vec::len).unwrap_or(0);
        if len == 0 || coeffs.iter().any(|c| c.len() != len) {
            return Err(Error::InvalidParameter(
                "Dirichlet coefficient vectors must be nonempty and of equal length".into(),
            ));
        }
        if coeffs.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite Dirichlet coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(sides: usize, max_mode: usize) -> Self {
        Self { coeffs: vec![vec![ZERO; max_mode + 1]; sides] }
    }

    /// Projects `u(j, t)` onto `P_0..P_max_mode` on each side with a Gauss-Legendre rule
    /// of `max_mode + 8` nodes.
    pub fn project<F>(sides: usize, max_mode: usize, mut u: F) -> Result<Self>
    where
        F: FnMut(usize, f64) -> Result<Complex64>,
    {
        Ok(Self { coeffs: project_sides(sides, max_mode, &mut u)? })
    }

    /// Coefficients from values at the `n`-point Gauss-Legendre nodes of each side (ascending
    /// in `t`, see [`sample_nodes`]); requires `n > max_mode`.
    pub fn from_samples(values: &[Vec<Complex64>], max_mode: usize) -> Result<Self> {
        let n = values.first().map(Vec::len).unwrap_or(0);
        if n <= max_mode || values.iter().any(|v| v.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "need the same number of samples (more than {max_mode}) on every side"
            )));
        }
        let (x, w) = gauss_legendre(n);
        let polys: Vec<Vec<f64>> = x.iter().map(|&t| legendre_upto(max_mode, t)).collect();
        let coeffs = values
            .iter()
            .map(|side| {
                (0..=max_mode)
                    .map(|m| {
                        let s: Complex64 = side.iter().enumerate().map(|(k, v)| v * (w[k] * polys[k][m])).sum();
                        s * ((2 * m + 1) as f64 / 2.0)
                    })
                    .collect()
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn sides(&self) -> usize {
        self.coeffs.len()
    }

    pub fn max_mode(&self) -> usize {
        self.coeffs[0].len() - 1
    }

    pub fn side(&self, j: usize) -> &[Complex64] {
        &self.coeffs[j]
    }

    pub fn scaled(&self, gamma: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.iter().map(|v| v * gamma).collect()).collect() }
    }

    /// Largest `|d_{M_D}| / max_m |d_m|` over the sides.
    pub fn tail_ratio(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|c| {
                let lead = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
                if lead == 0.0 {
                    0.0
                } else {
                    c[c.len() - 1].norm() / lead
                }
            })
            .fold(0.0, f64::max)
    }

    /// `Σ_m d_m P_m(t)` on side `j`.
    pub fn eval(&self, j: usize, t: f64) -> Complex64 {
        eval_series(&self.coeffs[j], t)
    }
}

pub(crate) fn eval_series(c: &[Complex64], t: f64) -> Complex64 {
    legendre_upto(c.len() - 1, t).iter().zip(c).map(|(p, c)| c * p).sum()
}

/// Parameters `t` at which [`DirichletData::from_samples`] expects its `n` values.
pub fn sample_nodes(n: usize) -> Vec<f64> {
    gauss_legendre(n).0
}

pub(crate) fn project_sides<F>(sides: usize, max_mode: usize, u: &mut F) -> Result<Vec<Vec<Complex64>>>
where
    F: FnMut(usize, f64) -> Result<Complex64>,
{
    let (x, w) = gauss_legendre(max_mode + 8);
    let polys: Vec<Vec<f64>> = x.iter().map(|&t| legendre_upto(max_mode, t)).collect();
    (0..sides)
        .map(|j| {
            let mut c = vec![ZERO; max_mode + 1];
            for (k, &t) in x.iter().enumerate() {
                let v = u(j, t)? * w[k];
                for (m, cm) in c.iter_mut().enumerate() {
                    *cm += v * polys[k][m];
                }
            }
            for (m, cm) in c.iter_mut().enumerate() {
                *cm *= (2 * m + 1) as f64 / 2.0;
            }
            Ok(c)
        })
        .collect()
}

/// The unknown Neumann coefficients `c_m^{(j)}`, stored side-major.
#[derive(Debug, Clone, PartialEq)]
pub struct NeumannCoefficients {
    sides: usize,
    modes: usize,
    data: Vec<Complex64>,
}

impl NeumannCoefficients {
    pub fn zeros(sides: usize, max_mode: usize) -> Self {
        Self { sides, modes: max_mode + 1, data: vec![ZERO; sides * (max_mode + 1)] }
    }

    pub fn from_blocks(blocks: Vec<Vec<Complex64>>) -> Result<Self> {
        let modes = blocks.first().map(Vec::len).unwrap_or(0);
        if modes == 0 || blocks.iter().any(|b| b.len() != modes) {
            return Err(Error::InvalidParameter("Neumann blocks must be nonempty and of equal length".into()));
        }
        let sides = blocks.len();
        Ok(Self { sides, modes, data: blocks.into_iter().flatten().collect() })
    }

    pub fn from_flat(sides: usize, max_mode: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != sides * (max_mode + 1) {
            return Err(Error::InvalidParameter("Neumann coefficient vector has the wrong length".into()));
        }
        Ok(Self { sides, modes: max_mode + 1, data })
    }

    /// Projects the Neumann values `u_N(j, t)` on each side, as for [`DirichletData::project`].
    pub fn project<F>(sides: usize, max_mode: usize, mut u: F) -> Result<Self>
    where
        F: FnMut(usize, f64) -> Result<Complex64>,
    {
        Self::from_blocks(project_sides(sides, max_mode, &mut u)?)
    }

    pub fn sides(&self) -> usize {
        self.sides
    }

    pub fn max_mode(&self) -> usize {
        self.modes - 1
    }

    pub fn side(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.modes..(j + 1) * self.modes]
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, j: usize, m: usize) -> Complex64 {
        self.data[j * self.modes + m]
    }

    /// The same coefficients truncated (or zero-padded) to `max_mode`.
    pub fn resized(&self, max_mode: usize) -> Self {
        let mut out = Self::zeros(self.sides, max_mode);
        for j in 0..self.sides {
            for m in 0..=max_mode.min(self.modes - 1) {
                out.data[j * (max_mode + 1) + m] = self.get(j, m);
            }
        }
        out
    }

    /// `Σ_m c_m^{(j)} P_m(t)`.
    pub fn eval(&self, j: usize, t: f64) -> Complex64 {
        eval_series(self.side(j), t)
    }
}

/// Fourier coefficients `a_k`, `-N_f ≤ k ≤ N_f`, of `f₀(φ) = Σ a_k e^{ikφ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeCoefficients {
    max_mode: usize,
    coeffs: Vec<Complex64>,
}

impl AmplitudeCoefficients {
    pub fn zeros(max_mode: usize) -> Self {
        Self { max_mode, coeffs: vec![ZERO; 2 * max_mode + 1] }
    }

    /// Coefficients listed from `k = -N_f` to `k = N_f`.
    pub fn from_vec(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidParameter("amplitude coefficient count must be odd".into()));
        }
        Ok(Self { max_mode: coeffs.len() / 2, coeffs })
    }

    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `a_k`, zero outside the stored range.
    pub fn get(&self, k: i64) -> Complex64 {
        let n = self.max_mode as i64;
        if k.abs() > n {
            ZERO
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn set(&mut self, k: i64, value: Complex64) {
        let n = self.max_mode as i64;
        assert!(k.abs() <= n, "amplitude mode {k} outside ±{n}");
        self.coeffs[(k + n) as usize] = value;
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n = self.max_mode as i64;
        self.coeffs.iter().enumerate().map(move |(i, &a)| (i as i64 - n, a))
    }

    /// `f₀(φ)` for real or complex `φ`.
    pub fn eval(&self, phi: Complex64) -> Complex64 {
        self.modes().map(|(k, a)| a * (I * phi * k as f64).exp()).sum()
    }
}

fn nonzero(lambda: Complex64) -> Result<()> {
    if lambda == ZERO {
        Err(Error::ZeroSpectralParameter)
    } else {
        Ok(())
    }
}

/// `e^{-iβ(λm_j - conj(m_j)/λ)} F_m(Λ)` for `m = 0..=max_mode`, evaluated without overflow.
pub fn side_modes(geom: &PolygonGeometry, j: usize, lambda: Complex64, max_mode: usize, beta: f64) -> Result<Vec<Complex64>> {
    nonzero(lambda)?;
    let m = geom.midpoint(j)?;
    let h = geom.halfside(j)?;
    let big = (lambda * h - h.conj() / lambda) * beta;
    let shift = -I * beta * (lambda * m - m.conj() / lambda);
    Ok((0..=max_mode).map(|k| legendre_flat_integral_scaled(big, k, shift)).collect())
}

/// Dirichlet part of the transform of side `j`.
pub fn uhat_dirichlet(geom: &PolygonGeometry, j: usize, lambda: Complex64, data: &DirichletData, beta: f64) -> Result<Complex64> {
    let modes = side_modes(geom, j, lambda, data.max_mode(), beta)?;
    let h = geom.halfside(j)?;
    let pre = I * beta * (h.conj() / lambda + lambda * h);
    Ok(pre * modes.iter().zip(data.side(j)).map(|(f, d)| f * d).sum::<Complex64>())
}

/// Neumann part of the transform of side `j`.
pub fn uhat_neumann(geom: &PolygonGeometry, j: usize, lambda: Complex64, c: &NeumannCoefficients, beta: f64) -> Result<Complex64> {
    let modes = side_modes(geom, j, lambda, c.max_mode(), beta)?;
    Ok(I * modes.iter().zip(c.side(j)).map(|(f, c)| f * c).sum::<Complex64>())
}

/// `f₀(φ)`.
pub fn amplitude_eval(a: &AmplitudeCoefficients, phi: Complex64) -> Complex64 {
    a.eval(phi)
}

/// `(-iλ)^{-k}` for `k = -N_f..=N_f`, the continuation of `e^{ikφ}` under `φ = i ln(-iλ)`.
pub fn amplitude_modes(lambda: Complex64, max_mode: usize) -> Result<Vec<Complex64>> {
    nonzero(lambda)?;
    let z = (-I * lambda).inv();
    let n = max_mode as i32;
    Ok((-n..=n).map(|k| z.powi(k)).collect())
}

/// Multiplier of `f₀` in the exterior global relation.
pub const FAR_FIELD_FACTOR: f64 = -4.0;

/// `I(λ) = -4 Σ a_k (-iλ)^{-k}`.
pub fn far_field_integral(a: &AmplitudeCoefficients, lambda: Complex64) -> Result<Complex64> {
    let modes = amplitude_modes(lambda, a.max_mode())?;
    Ok(FAR_FIELD_FACTOR * modes.iter().zip(a.as_slice()).map(|(z, a)| z * a).sum::<Complex64>())
}

/// Coefficients `(A, B)` of the closed form `W = A dz + B dz̄` built from a solution with
/// value `u` and gradient `(u_x, u_y)` at `z`:
/// `W = e^{-iβ(λz - z̄/λ)} [(u_z + iβλu) dz - (u_z̄ + βu/(iλ)) dz̄]`.
pub fn differential_form(
    u: Complex64,
    ux: Complex64,
    uy: Complex64,
    z: Complex64,
    lambda: Complex64,
    beta: f64,
) -> (Complex64, Complex64) {
    let e = (-I * beta * (lambda * z - z.conj() / lambda)).exp();
    let uz = (ux - I * uy) * 0.5;
    let uzb = (ux + I * uy) * 0.5;
    (e * (uz + I * beta * lambda * u), -e * (uzb + beta * u / (I * lambda)))
}

/// Which global relation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    /// `Σ_j û_j(λ) = I(λ)` for the exterior problem.
    Exterior,
    /// `Σ_j û_j(λ) = 0` for a solution regular inside the polygon.
    Interior,
}

/// `Σ_j û_j(λ) - I(λ)` (or without `I` for [`Relation::Interior`]).
pub fn global_residual(
    geom: &PolygonGeometry,
    lambda: Complex64,
    c: &NeumannCoefficients,
    a: &AmplitudeCoefficients,
    data: &DirichletData,
    beta: f64,
    relation: Relation,
) -> Result<Complex64> {
    let mut sum = ZERO;
    for j in 0..geom.sides() {
        sum += uhat_dirichlet(geom, j, lambda, data, beta)? + uhat_neumann(geom, j, lambda, c, beta)?;
    }
    if relation == Relation::Exterior {
        sum -= far_field_integral(a, lambda)?;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_data_gives_zero() {
        let g = PolygonGeometry::square();
        let l = c(0.3, 0.8);
        assert_eq!(uhat_dirichlet(&g, 0, l, &DirichletData::zeros(4, 5), 1.0).unwrap(), ZERO);
        assert_eq!(uhat_neumann(&g, 2, l, &NeumannCoefficients::zeros(4, 5), 1.0).unwrap(), ZERO);
        let r = global_residual(
            &g,
            l,
            &NeumannCoefficients::zeros(4, 3),
            &AmplitudeCoefficients::zeros(2),
            &DirichletData::zeros(4, 3),
            1.0,
            Relation::Exterior,
        )
        .unwrap();
        assert_eq!(r, ZERO);
    }

    #[test]
    fn constant_data_closed_form() {
        let g = PolygonGeometry::square();
        let beta = 1.3;
        let mut d = vec![vec![ZERO; 3]; 4];
        d[1][0] = c(1.0, 0.0);
        let data = DirichletData::new(d).unwrap();
        let l = c(0.4, -1.1);
        let (m, h) = (g.midpoint(1).unwrap(), g.halfside(1).unwrap());
        let big = (l * h - h.conj() / l) * beta;
        let expect = I * beta * (h.conj() / l + l * h) * (-I * beta * (l * m - m.conj() / l)).exp() * 2.0 * big.sin() / big;
        let got = uhat_dirichlet(&g, 1, l, &data, beta).unwrap();
        assert!((got - expect).norm() < 1e-13 * expect.norm());

        let mut nc = NeumannCoefficients::zeros(4, 2);
        nc.data[3] = c(1.0, 0.0);
        let expect = I * (-I * beta * (l * m - m.conj() / l)).exp() * 2.0 * big.sin() / big;
        let got = uhat_neumann(&g, 1, l, &nc, beta).unwrap();
        assert!((got - expect).norm() < 1e-13 * expect.norm());
    }

    #[test]
    fn amplitude_examples() {
        let mut a = AmplitudeCoefficients::zeros(2);
        a.set(0, c(1.0, 0.0));
        assert!((a.eval(c(0.7, 0.0)) - 1.0).norm() < 1e-15);
        let l = c(0.6, 0.8);
        assert!((far_field_integral(&a, l).unwrap() - c(-4.0, 0.0)).norm() < 1e-14);
        let mut b = AmplitudeCoefficients::zeros(2);
        b.set(1, c(0.0, -1.0));
        let phi = c(0.3, 0.0);
        assert!((b.eval(phi) - c(0.0, -1.0) * (I * phi).exp()).norm() < 1e-15);
        assert!((far_field_integral(&b, l).unwrap() - c(-4.0, 0.0) / l).norm() < 1e-14);
        assert_eq!(far_field_integral(&AmplitudeCoefficients::zeros(3), l).unwrap(), ZERO);
        assert_eq!(far_field_integral(&a, ZERO), Err(Error::ZeroSpectralParameter));
    }

    #[test]
    fn coefficient_containers() {
        let n = NeumannCoefficients::from_blocks(vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(3.0, 0.0), c(4.0, 0.0)]]).unwrap();
        assert_eq!(n.get(1, 0), c(3.0, 0.0));
        assert_eq!(n.eval(0, 0.5), c(2.0, 0.0));
        assert_eq!(n.resized(0).as_slice(), &[c(1.0, 0.0), c(3.0, 0.0)]);
        assert!(DirichletData::new(vec![vec![ZERO; 2], vec![ZERO; 3]]).is_err());
        assert!(AmplitudeCoefficients::from_vec(vec![ZERO; 4]).is_err());
    }
}
