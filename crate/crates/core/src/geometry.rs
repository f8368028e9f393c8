//! Convex polygons, side parametrizations and the spectral rays attached to each side.
//!
//! Sides are indexed from 0: side `j` runs from vertex `j` to vertex `j + 1` (cyclically)
//! and is parametrized as `z(t) = m_j + t h_j` for `t` in `[-1, 1]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance used to decide that two consecutive edges are parallel.
const CONVEXITY_TOL: f64 = 1e-12;

/// A counterclockwise convex polygon together with its derived side data.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonGeometry {
    vertices: Vec<Complex64>,
    midpoints: Vec<Complex64>,
    halfsides: Vec<Complex64>,
    ray_angles: Vec<f64>,
}

/// A point on side `side` at parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidePoint {
    pub side: usize,
    pub t: f64,
    pub z: Complex64,
}

impl PolygonGeometry {
    /// Validates the vertex list and precomputes midpoints, half-sides and ray angles.
    pub fn new(vertices: Vec<Complex64>) -> Result<Self> {
        let n = vertices.len();
        if n < 3 {
            return Err(Error::TooFewVertices(n));
        }
        let edges: Vec<Complex64> = (0..n).map(|j| vertices[(j + 1) % n] - vertices[j]).collect();
        let scale = edges.iter().map(|e| e.norm()).fold(0.0, f64::max);
        for (j, e) in edges.iter().enumerate() {
            if e.norm() <= 1e-14 * scale.max(f64::MIN_POSITIVE) {
                return Err(Error::DegenerateSide { side: j });
            }
        }
        let crosses: Vec<f64> = (0..n)
            .map(|j| {
                let a = edges[(j + n - 1) % n];
                let b = edges[j];
                (a.re * b.im - a.im * b.re) / (a.norm() * b.norm())
            })
            .collect();
        let area2: f64 = (0..n)
            .map(|j| {
                let a = vertices[j];
                let b = vertices[(j + 1) % n];
                a.re * b.im - a.im * b.re
            })
            .sum();
        if crosses.iter().all(|&c| c < -CONVEXITY_TOL) || area2 <= 0.0 {
            return Err(Error::WrongOrientation);
        }
        if let Some(vertex) = crosses.iter().position(|&c| c <= CONVEXITY_TOL) {
            return Err(Error::NotConvex { vertex });
        }
        let midpoints = (0..n).map(|j| (vertices[j] + vertices[(j + 1) % n]) * 0.5).collect();
        let halfsides: Vec<Complex64> = edges.iter().map(|e| e * 0.5).collect();
        let ray_angles = halfsides.iter().map(|h| reduce_angle(-h.arg())).collect();
        Ok(Self { vertices, midpoints, halfsides, ray_angles })
    }

    /// The square with vertices `1+i, -1+i, -1-i, 1-i`.
    pub fn square() -> Self {
        let v = [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)];
        Self::new(v.iter().map(|&(x, y)| Complex64::new(x, y)).collect())
            .expect("the unit square is a valid polygon")
    }

    pub fn sides(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[Complex64] {
        &self.vertices
    }

    pub fn midpoints(&self) -> &[Complex64] {
        &self.midpoints
    }

    pub fn halfsides(&self) -> &[Complex64] {
        &self.halfsides
    }

    pub fn ray_angles(&self) -> &[f64] {
        &self.ray_angles
    }

    fn check(&self, j: usize) -> Result<()> {
        if j < self.sides() {
            Ok(())
        } else {
            Err(Error::SideIndex { index: j, sides: self.sides() })
        }
    }

    pub fn midpoint(&self, j: usize) -> Result<Complex64> {
        self.check(j)?;
        Ok(self.midpoints[j])
    }

    pub fn halfside(&self, j: usize) -> Result<Complex64> {
        self.check(j)?;
        Ok(self.halfsides[j])
    }

    /// Direction `-arg(h_j)` of the ray `l_j`, in `(-pi, pi]`.
    pub fn ray_angle(&self, j: usize) -> Result<f64> {
        self.check(j)?;
        Ok(self.ray_angles[j])
    }

    /// `z(t) = m_j + t h_j`.
    pub fn point(&self, j: usize, t: f64) -> Result<Complex64> {
        self.check(j)?;
        Ok(self.midpoints[j] + self.halfsides[j] * t)
    }

    pub fn side_point(&self, j: usize, t: f64) -> Result<SidePoint> {
        Ok(SidePoint { side: j, t, z: self.point(j, t)? })
    }

    /// The two zeros `±e^{-i arg h_j}` of `λ h_j - conj(h_j)/λ`.
    pub fn kernel_zeros(&self, j: usize) -> Result<[Complex64; 2]> {
        let theta = self.ray_angle(j)?;
        let z = Complex64::from_polar(1.0, theta);
        Ok([z, -z])
    }

    /// The same polygon shifted by `c`.
    pub fn translated(&self, c: Complex64) -> Result<Self> {
        Self::new(self.vertices.iter().map(|v| v + c).collect())
    }

    /// True when `z` lies strictly inside the polygon.
    pub fn contains(&self, z: Complex64) -> bool {
        (0..self.sides()).all(|j| {
            let h = self.halfsides[j];
            let d = z - self.vertices[j];
            h.re * d.im - h.im * d.re > 0.0
        })
    }

    /// Distance from `z` to the polygon boundary.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        (0..self.sides())
            .map(|j| {
                let a = self.vertices[j];
                let e = self.halfsides[j] * 2.0;
                let s = ((z - a) * e.conj()).re / e.norm_sqr();
                (z - (a + e * s.clamp(0.0, 1.0))).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

/// Maps an angle to `(-pi, pi]`.
pub fn reduce_angle(theta: f64) -> f64 {
    let mut a = theta.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}
