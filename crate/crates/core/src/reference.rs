//! Exact exterior solutions `u = H_ν^{(1)}(2iβr) (A e^{iνφ} + B e^{-iνφ})` and their data.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::PolygonGeometry;
use crate::specfun::bessel_k_upto;
use crate::transforms::{AmplitudeCoefficients, DirichletData, NeumannCoefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// A Hankel-type exterior solution of `Δu - 4β²u = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelSolution {
    pub order: usize,
    pub a: Complex64,
    pub b: Complex64,
    pub beta: f64,
}

/// Value and Cartesian gradient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldValue {
    pub u: Complex64,
    pub ux: Complex64,
    pub uy: Complex64,
}

fn neg_i_pow(k: usize) -> Complex64 {
    [Complex64::new(1.0, 0.0), -I, Complex64::new(-1.0, 0.0), I][k % 4]
}

impl HankelSolution {
    pub fn new(order: usize, a: Complex64, b: Complex64, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        Ok(Self { order, a, b, beta })
    }

    /// `ν = 0, A = 1, B = 0`: the radially symmetric solution with `f₀ ≡ 1`.
    pub fn example1(beta: f64) -> Self {
        Self { order: 0, a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0), beta }
    }

    /// `ν = 1, A = 1, B = 0`: `f₀(φ) = -i e^{iφ}`.
    pub fn example2(beta: f64) -> Self {
        Self { order: 1, a: Complex64::new(1.0, 0.0), b: Complex64::new(0.0, 0.0), beta }
    }

    /// `u`, `u_x`, `u_y` at `z`, using `H_ν^{(1)}(ix) = (2/π)(-i)^{ν+1} K_ν(x)`.
    pub fn eval(&self, z: Complex64) -> Result<FieldValue> {
        let r = z.norm();
        if r == 0.0 {
            return Err(Error::OriginSingular);
        }
        let nu = self.order;
        let x = 2.0 * self.beta * r;
        let k = bessel_k_upto(nu + 1, x)?;
        let dk = if nu == 0 { -k[1] } else { -0.5 * (k[nu - 1] + k[nu + 1]) };
        let c = neg_i_pow(nu + 1) * (2.0 / PI);
        let phi = z.arg();
        let ep = (I * (nu as f64) * phi).exp();
        let em = ep.inv();
        let ang = self.a * ep + self.b * em;
        let dang = I * nu as f64 * (self.a * ep - self.b * em);
        let u = c * k[nu] * ang;
        let ur = c * 2.0 * self.beta * dk * ang;
        let uphi = c * k[nu] * dang / r;
        let (s, co) = phi.sin_cos();
        Ok(FieldValue { u, ux: ur * co - uphi * s, uy: ur * s + uphi * co })
    }

    /// `u` at `z_j(t)`.
    pub fn dirichlet_value(&self, geom: &PolygonGeometry, j: usize, t: f64) -> Result<Complex64> {
        Ok(self.eval(geom.point(j, t)?)?.u)
    }

    /// Outward normal derivative times `|h_j|` at `z_j(t)`.
    pub fn neumann_value(&self, geom: &PolygonGeometry, j: usize, t: f64) -> Result<Complex64> {
        let f = self.eval(geom.point(j, t)?)?;
        let h = geom.halfside(j)?;
        Ok(f.ux * h.im - f.uy * h.re)
    }

    /// Legendre projections of the Dirichlet and Neumann traces on every side.
    pub fn traces(&self, geom: &PolygonGeometry, max_mode: usize) -> Result<(DirichletData, NeumannCoefficients)> {
        let n = geom.sides();
        let d = DirichletData::project(n, max_mode, |j, t| self.dirichlet_value(geom, j, t))?;
        let c = NeumannCoefficients::project(n, max_mode, |j, t| self.neumann_value(geom, j, t))?;
        Ok((d, c))
    }

    /// `f₀(φ) = (-i)^ν (A e^{iνφ} + B e^{-iνφ})`.
    pub fn amplitude(&self) -> AmplitudeCoefficients {
        let nu = self.order as i64;
        let mut a = AmplitudeCoefficients::zeros(self.order);
        let phase = neg_i_pow(self.order);
        a.set(nu, a.get(nu) + phase * self.a);
        a.set(-nu, a.get(-nu) + phase * self.b);
        a
    }

    /// `|u / [√(1/(πiβr)) e^{i(2iβr - π/4)}] - (f₀ + f₁/r + f₂/r²)|` at `z = r e^{iφ}`,
    /// with `f₁`, `f₂` from the large-argument expansion; defined for `ν ∈ {0, 1}`.
    pub fn farfield_deviation(&self, r: f64, phi: f64) -> Result<f64> {
        let beta = self.beta;
        let (c1, c2) = match self.order {
            0 => (-1.0 / (16.0 * beta), 9.0 / (512.0 * beta * beta)),
            1 => (3.0 / (16.0 * beta), -15.0 / (512.0 * beta * beta)),
            nu => {
                return Err(Error::InvalidParameter(format!(
                    "far-field corrections are tabulated for orders 0 and 1, got {nu}"
                )))
            }
        };
        let z = Complex64::from_polar(r, phi);
        let u = self.eval(z)?.u;
        let carrier = (1.0 / (PI * I * beta * r)).sqrt() * (I * (2.0 * I * beta * r - PI / 4.0)).exp();
        let f0 = self.amplitude().eval(Complex64::new(phi, 0.0));
        let expansion = f0 * (1.0 + c1 / r + c2 / (r * r));
        Ok((u / carrier - expansion).norm())
    }
}
