//! Collocation planning, assembly of the overdetermined system and its least-squares solve.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::contourquad::QuadParams;
use crate::error::{Error, Result};
use crate::geometry::PolygonGeometry;
use crate::quadrature::gauss_legendre;
use crate::supplement::{side_limit_row, u_dirichlet_field, EvalPoint, KernelRoute};
use crate::transforms::{amplitude_modes, side_modes, uhat_dirichlet, AmplitudeCoefficients, DirichletData, NeumannCoefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative singular-value cutoff below which the system is treated as rank deficient.
pub const RANK_RCOND: f64 = 1e-12;

/// Layout of the collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanOptions {
    pub unit_points: usize,
    pub unit_offset: f64,
    /// Additional circles `(radius, points)` sharing `aux_offset`.
    pub aux_circles: Vec<(f64, usize)>,
    pub aux_offset: f64,
    /// Interior Gauss-Legendre nodes per side for the boundary-limit rows.
    pub side_nodes: usize,
    /// Minimum distance of a λ-point from `0` and from the kernel zeros.
    pub exclusion: f64,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            unit_points: 64,
            unit_offset: PI / 64.0,
            aux_circles: vec![(2.0, 16), (0.5, 16)],
            aux_offset: PI / 16.0,
            side_nodes: 13,
            exclusion: 0.045,
        }
    }
}

/// Spectral points for the global relation and side parameters for the boundary limits.
#[derive(Debug, Clone, PartialEq)]
pub struct CollocationPlan {
    pub global_points: Vec<Complex64>,
    pub side_nodes: Vec<f64>,
    pub exclusion: f64,
}

impl CollocationPlan {
    /// Builds the plan, dropping λ-points that fall inside an exclusion disk.
    pub fn from_options(geom: &PolygonGeometry, opts: &PlanOptions) -> Self {
        let ring = |r: f64, n: usize, off: f64| {
            (0..n).map(move |k| Complex64::from_polar(r, off + 2.0 * PI * k as f64 / n as f64))
        };
        let mut pts: Vec<Complex64> = ring(1.0, opts.unit_points, opts.unit_offset).collect();
        for &(r, n) in &opts.aux_circles {
            pts.extend(ring(r, n, opts.aux_offset));
        }
        let zeros = kernel_zeros(geom);
        pts.retain(|p| p.norm() >= opts.exclusion && zeros.iter().all(|z| (p - z).norm() >= opts.exclusion));
        let side_nodes = if opts.side_nodes == 0 { Vec::new() } else { gauss_legendre(opts.side_nodes).0 };
        Self { global_points: pts, side_nodes, exclusion: opts.exclusion }
    }

    pub fn rows(&self, sides: usize) -> usize {
        self.global_points.len() + sides * self.side_nodes.len()
    }

    /// Checks the exclusion disks and that the system is overdetermined by at least 1.5.
    pub fn validate(&self, geom: &PolygonGeometry, unknowns: usize) -> Result<()> {
        let zeros = kernel_zeros(geom);
        for p in &self.global_points {
            if p.norm() < self.exclusion || zeros.iter().any(|z| (p - z).norm() < self.exclusion) {
                return Err(Error::InvalidPlan(format!("λ = {p} lies inside an exclusion disk")));
            }
        }
        let rows = self.rows(geom.sides());
        if (rows as f64) < 1.5 * unknowns as f64 {
            return Err(Error::InvalidPlan(format!("{rows} rows for {unknowns} unknowns")));
        }
        Ok(())
    }
}

fn kernel_zeros(geom: &PolygonGeometry) -> Vec<Complex64> {
    (0..geom.sides()).flat_map(|j| geom.kernel_zeros(j).expect("side index in range")).collect()
}

/// The default layout: 64 unit-circle points, 16 each on radii 2 and 1/2, 13 nodes per side.
pub fn default_plan(geom: &PolygonGeometry, _max_mode: usize, _amplitude_modes: usize) -> CollocationPlan {
    CollocationPlan::from_options(geom, &PlanOptions::default())
}

/// Unknown attached to a matrix column.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Neumann { side: usize, mode: usize },
    Amplitude { k: i64 },
}

/// Origin of a matrix row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RowKind {
    Global { lambda: Complex64 },
    SideLimit { side: usize, t: f64 },
}

/// The scaled collocation system.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    pub columns: Vec<Column>,
    pub rows: Vec<RowKind>,
    /// Each row was divided by this factor.
    pub scales: Vec<f64>,
    pub sides: usize,
    pub max_mode: usize,
    pub amplitude_modes: usize,
    pub assembly_time: Duration,
}

/// Everything needed to assemble a system besides the geometry and the data.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSettings {
    pub beta: f64,
    pub max_mode: usize,
    pub amplitude_modes: usize,
    pub quad: QuadParams,
    pub route: KernelRoute,
}

impl SolverSettings {
    pub fn new(beta: f64, max_mode: usize, amplitude_modes: usize) -> Self {
        Self { beta, max_mode, amplitude_modes, quad: QuadParams::default(), route: KernelRoute::Direct }
    }

    pub fn unknowns(&self, sides: usize) -> usize {
        sides * (self.max_mode + 1) + 2 * self.amplitude_modes + 1
    }
}

fn global_row(
    geom: &PolygonGeometry,
    lambda: Complex64,
    data: &DirichletData,
    s: &SolverSettings,
) -> Result<(Vec<Complex64>, Complex64)> {
    let mut row = Vec::with_capacity(s.unknowns(geom.sides()));
    let mut rhs = Complex64::new(0.0, 0.0);
    for j in 0..geom.sides() {
        row.extend(side_modes(geom, j, lambda, s.max_mode, s.beta)?.into_iter().map(|v| I * v));
        rhs -= uhat_dirichlet(geom, j, lambda, data, s.beta)?;
    }
    row.extend(amplitude_modes(lambda, s.amplitude_modes)?.into_iter().map(|v| 4.0 * v));
    Ok((row, rhs))
}

fn limit_row(
    geom: &PolygonGeometry,
    side: usize,
    t: f64,
    data: &DirichletData,
    s: &SolverSettings,
) -> Result<(Vec<Complex64>, Complex64)> {
    let at = geom.side_point(side, t)?;
    let mut row = side_limit_row(geom, s.beta, &at, s.max_mode, &s.quad, s.route)?;
    row.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), 2 * s.amplitude_modes + 1));
    let rhs = -u_dirichlet_field(geom, s.beta, &EvalPoint::Boundary(at), data, &s.quad, s.route)?;
    Ok((row, rhs))
}

/// Assembles global-relation rows followed by boundary-limit rows, each scaled by its
/// largest coefficient.
pub fn build_system(
    geom: &PolygonGeometry,
    plan: &CollocationPlan,
    data: &DirichletData,
    settings: &SolverSettings,
) -> Result<LinearSystem> {
    let start = Instant::now();
    let n = geom.sides();
    if data.sides() != n {
        return Err(Error::InvalidParameter(format!("Dirichlet data has {} sides, polygon has {n}", data.sides())));
    }
    if settings.beta.is_nan() || settings.beta <= 0.0 {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {}", settings.beta)));
    }
    let unknowns = settings.unknowns(n);
    plan.validate(geom, unknowns)?;
    let mut kinds: Vec<RowKind> = plan.global_points.iter().map(|&lambda| RowKind::Global { lambda }).collect();
    for side in 0..n {
        kinds.extend(plan.side_nodes.iter().map(|&t| RowKind::SideLimit { side, t }));
    }
    let rows: Vec<(Vec<Complex64>, Complex64)> = kinds
        .par_iter()
        .map(|kind| match *kind {
            RowKind::Global { lambda } => global_row(geom, lambda, data, settings),
            RowKind::SideLimit { side, t } => limit_row(geom, side, t, data, settings),
        })
        .collect::<Result<_>>()?;
    let mut matrix = DMatrix::zeros(rows.len(), unknowns);
    let mut rhs = DVector::zeros(rows.len());
    let mut scales = Vec::with_capacity(rows.len());
    for (r, (row, b)) in rows.iter().enumerate() {
        if row.iter().any(|v| !v.is_finite()) || !b.is_finite() {
            return Err(Error::AssemblyNonFinite { row: r });
        }
        let scale = row.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let scale = if scale > 0.0 { scale } else { 1.0 };
        for (c, v) in row.iter().enumerate() {
            matrix[(r, c)] = v / scale;
        }
        rhs[r] = b / scale;
        scales.push(scale);
    }
    let mut columns: Vec<Column> =
        (0..n).flat_map(|side| (0..=settings.max_mode).map(move |mode| Column::Neumann { side, mode })).collect();
    let nf = settings.amplitude_modes as i64;
    columns.extend((-nf..=nf).map(|k| Column::Amplitude { k }));
    Ok(LinearSystem {
        matrix,
        rhs,
        columns,
        rows: kinds,
        scales,
        sides: n,
        max_mode: settings.max_mode,
        amplitude_modes: settings.amplitude_modes,
        assembly_time: start.elapsed(),
    })
}

impl LinearSystem {
    /// Scaled residual `A x - b` of a candidate solution.
    pub fn residual(&self, neumann: &NeumannCoefficients, amplitude: &AmplitudeCoefficients) -> DVector<Complex64> {
        let mut x: Vec<Complex64> = neumann.as_slice().to_vec();
        x.extend_from_slice(amplitude.as_slice());
        &self.matrix * DVector::from_vec(x) - &self.rhs
    }
}

/// Solution of the collocation system with diagnostics.
#[derive(Debug, Clone)]
pub struct SolveReport {
    pub neumann: NeumannCoefficients,
    pub amplitude: AmplitudeCoefficients,
    pub residual_norm: f64,
    pub condition: f64,
    pub singular_values: Vec<f64>,
    pub rank_deficient: bool,
    pub row_residuals: Vec<f64>,
    pub rows: Vec<RowKind>,
    pub assembly_time: Duration,
    pub solve_time: Duration,
}

/// Minimum-norm least-squares solution through the singular value decomposition.
pub fn solve_least_squares(sys: &LinearSystem) -> Result<SolveReport> {
    let start = Instant::now();
    let (rows, cols) = sys.matrix.shape();
    if rows < cols {
        return Err(Error::InvalidPlan(format!("{rows} rows for {cols} unknowns")));
    }
    let svd = sys.matrix.clone().svd(true, true);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let smax = sv.first().copied().unwrap_or(0.0);
    let smin = sv.last().copied().unwrap_or(0.0);
    let cutoff = smax * RANK_RCOND;
    let x = svd.solve(&sys.rhs, cutoff).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let r = &sys.matrix * &x - &sys.rhs;
    let n_neu = sys.sides * (sys.max_mode + 1);
    let neumann = NeumannCoefficients::from_flat(sys.sides, sys.max_mode, x.iter().take(n_neu).copied().collect())?;
    let amplitude = AmplitudeCoefficients::from_vec(x.iter().skip(n_neu).copied().collect())?;
    Ok(SolveReport {
        neumann,
        amplitude,
        residual_norm: r.norm(),
        condition: if smin > 0.0 { smax / smin } else { f64::INFINITY },
        singular_values: sv,
        rank_deficient: smin <= cutoff,
        row_residuals: r.iter().map(|v| v.norm()).collect(),
        rows: sys.rows.clone(),
        assembly_time: sys.assembly_time,
        solve_time: start.elapsed(),
    })
}

/// `Σ_m c_m^{(j)} P_m(t)` from a solve.
pub fn neumann_trace(report: &SolveReport, j: usize, t: f64) -> Complex64 {
    report.neumann.eval(j, t)
}

/// Plans, assembles and solves with the default layout.
pub fn solve(geom: &PolygonGeometry, data: &DirichletData, settings: &SolverSettings) -> Result<SolveReport> {
    let plan = default_plan(geom, settings.max_mode, settings.amplitude_modes);
    solve_least_squares(&build_system(geom, &plan, data, settings)?)
}
