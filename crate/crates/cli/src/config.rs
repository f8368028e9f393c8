//! Run configuration read from a TOML file.

use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use utx_core::contourquad::{DetourSide, QuadParams};
use utx_core::geometry::PolygonGeometry;
use utx_core::solver::{PlanOptions, SolverSettings};
use utx_core::specfun::MAX_ORDER;
use utx_core::supplement::KernelRoute;

/// A complex number written as `[re, im]`.
pub type Pair = [f64; 2];

pub fn to_complex(p: Pair) -> Complex64 {
    Complex64::new(p[0], p[1])
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub beta: f64,
    pub max_mode: usize,
    pub amplitude_modes: usize,
    pub dirichlet_modes: Option<usize>,
    pub vertices: Option<Vec<Pair>>,
    pub output: Option<PathBuf>,
    pub data: DataSource,
    #[serde(default)]
    pub collocation: Collocation,
    #[serde(default)]
    pub quadrature: Quadrature,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSource {
    pub example: Option<u8>,
    /// Values at the Gauss-Legendre nodes of each side.
    pub samples: Option<Vec<Vec<Pair>>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Collocation {
    pub unit_points: usize,
    /// `[radius, points]` for each additional circle.
    pub circles: Vec<(f64, usize)>,
    pub side_nodes: usize,
    pub exclusion: f64,
}

impl Default for Collocation {
    fn default() -> Self {
        let p = PlanOptions::default();
        Self { unit_points: p.unit_points, circles: p.aux_circles, side_nodes: p.side_nodes, exclusion: p.exclusion }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Direct,
    Split,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Quadrature {
    pub step: f64,
    pub half_width: f64,
    pub tolerance: f64,
    pub indent_radius: f64,
    pub residue_radius: f64,
    pub residue_points: usize,
    pub route: Route,
}

impl Default for Quadrature {
    fn default() -> Self {
        let q = QuadParams::default();
        Self {
            step: q.step,
            half_width: q.half_width,
            tolerance: q.tolerance,
            indent_radius: q.indent_radius,
            residue_radius: q.residue_radius,
            residue_points: q.residue_points,
            route: Route::Direct,
        }
    }
}

/// Which Dirichlet data a run uses, after validation.
#[derive(Debug, Clone)]
pub enum Data {
    Example(u8),
    Samples(Vec<Vec<Complex64>>),
}

/// A validated configuration ready to run.
#[derive(Debug, Clone)]
pub struct Run {
    pub geometry: PolygonGeometry,
    pub settings: SolverSettings,
    pub plan: PlanOptions,
    pub dirichlet_modes: usize,
    pub data: Data,
    pub output: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("invalid config {}", path.display()))
    }

    /// Checks every invariant and resolves defaults.
    pub fn validate(self) -> Result<Run> {
        ensure!(self.beta.is_finite() && self.beta > 0.0, "beta must be positive, got {}", self.beta);
        ensure!(self.max_mode >= 1, "max_mode must be at least 1");
        ensure!(self.amplitude_modes >= 1, "amplitude_modes must be at least 1");
        let dirichlet_modes = self.dirichlet_modes.unwrap_or(self.max_mode + 4);
        ensure!(dirichlet_modes >= 1, "dirichlet_modes must be at least 1");
        for (name, m) in [("max_mode", self.max_mode), ("dirichlet_modes", dirichlet_modes)] {
            ensure!(m <= MAX_ORDER, "{name} = {m} exceeds the supported maximum {MAX_ORDER}");
        }

        let c = &self.collocation;
        ensure!(c.unit_points >= 1, "collocation.unit_points must be at least 1");
        ensure!(c.side_nodes >= 1, "collocation.side_nodes must be at least 1");
        ensure!(c.exclusion.is_finite() && c.exclusion > 0.0, "collocation.exclusion must be positive");
        for &(r, n) in &c.circles {
            ensure!(r.is_finite() && r > 0.0, "circle radius must be positive, got {r}");
            ensure!(n >= 1, "circle point counts must be at least 1");
        }

        let q = &self.quadrature;
        ensure!(
            q.tolerance > 0.0 && q.tolerance <= 1e-2,
            "quadrature.tolerance must lie in (0, 1e-2], got {}",
            q.tolerance
        );
        ensure!(q.step.is_finite() && q.step > 0.0, "quadrature.step must be positive");
        ensure!(q.half_width.is_finite() && q.half_width > q.step, "quadrature.half_width must exceed the step");
        ensure!(q.indent_radius > 0.0 && q.indent_radius < 0.5, "quadrature.indent_radius must lie in (0, 0.5)");
        ensure!(q.residue_radius > 0.0 && q.residue_radius < 1.0, "quadrature.residue_radius must lie in (0, 1)");
        ensure!(q.residue_points >= 1, "quadrature.residue_points must be at least 1");

        let vertices: Vec<Complex64> = match &self.vertices {
            Some(v) => v.iter().copied().map(to_complex).collect(),
            None => PolygonGeometry::square().vertices().to_vec(),
        };
        let geometry = PolygonGeometry::new(vertices).context("invalid polygon")?;

        let data = match (&self.data.example, &self.data.samples) {
            (Some(e), None) => {
                ensure!(*e == 1 || *e == 2, "data.example must be 1 or 2, got {e}");
                ensure!(geometry.contains(Complex64::new(0.0, 0.0)), "builtin examples need the origin inside the polygon");
                Data::Example(*e)
            }
            (None, Some(s)) => {
                ensure!(s.len() == geometry.sides(), "data.samples has {} sides, polygon has {}", s.len(), geometry.sides());
                let n = s[0].len();
                ensure!(
                    s.iter().all(|v| v.len() == n) && n > dirichlet_modes,
                    "every side needs the same number of samples, more than dirichlet_modes = {dirichlet_modes}"
                );
                let values: Vec<Vec<Complex64>> = s.iter().map(|v| v.iter().copied().map(to_complex).collect()).collect();
                ensure!(values.iter().flatten().all(|v| v.is_finite()), "data.samples contains non-finite values");
                Data::Samples(values)
            }
            _ => bail!("data needs exactly one of `example` or `samples`"),
        };

        let mut quad = QuadParams {
            step: q.step,
            half_width: q.half_width,
            tolerance: q.tolerance,
            indent_radius: q.indent_radius,
            residue_radius: q.residue_radius,
            residue_points: q.residue_points,
            ..QuadParams::default()
        };
        if std::env::var_os(utx_core::contourquad::TOLERANCE_ENV).is_some() {
            let probe = QuadParams::from_env();
            quad.step = probe.step;
            quad.tolerance = probe.tolerance;
        }
        let route = match q.route {
            Route::Direct => KernelRoute::Direct,
            Route::Split => KernelRoute::Split { detour: DetourSide::Right },
        };
        let settings = SolverSettings { quad, route, ..SolverSettings::new(self.beta, self.max_mode, self.amplitude_modes) };
        let plan = PlanOptions {
            unit_points: c.unit_points,
            aux_circles: c.circles.clone(),
            side_nodes: c.side_nodes,
            exclusion: c.exclusion,
            ..PlanOptions::default()
        };
        Ok(Run {
            geometry,
            settings,
            plan,
            dirichlet_modes,
            data,
            output: self.output.unwrap_or_else(|| PathBuf::from("utx-out")),
        })
    }
}
