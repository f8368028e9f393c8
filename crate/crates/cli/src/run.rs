//! The `solve` subcommand: assemble, solve and write artifacts.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Serialize;
use utx_core::reference::HankelSolution;
use utx_core::solver::{build_system, solve_least_squares, CollocationPlan, SolveReport};
use utx_core::transforms::DirichletData;

use crate::config::{Data, Run};
use crate::plot::{line_chart, Series};

pub const F0_POINTS: usize = 361;
pub const TRACE_POINTS: usize = 201;

/// Failure classes of a run, each with its own exit status.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("configuration error: {0:#}")]
    Config(anyhow::Error),
    #[error("assembly failed: {0:#}")]
    Assembly(anyhow::Error),
    #[error("cannot write artifacts: {0:#}")]
    Output(anyhow::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Assembly(_) => 3,
            Self::Output(_) => 1,
        }
    }
}

/// Outcome of a completed solve.
pub struct Finished {
    pub output: PathBuf,
    pub rank_deficient: bool,
}

#[derive(Serialize)]
struct AmplitudeEntry {
    k: i64,
    value: [f64; 2],
}

#[derive(Serialize)]
struct Quantiles {
    min: f64,
    p25: f64,
    median: f64,
    p75: f64,
    p90: f64,
    max: f64,
}

#[derive(Serialize)]
struct Timings {
    assembly_s: f64,
    solve_s: f64,
    total_s: f64,
}

#[derive(Serialize)]
struct Report {
    beta: f64,
    max_mode: usize,
    amplitude_modes: usize,
    dirichlet_modes: usize,
    vertices: Vec<[f64; 2]>,
    example: Option<u8>,
    rows: usize,
    unknowns: usize,
    neumann_coefficients: Vec<Vec<[f64; 2]>>,
    amplitude_coefficients: Vec<AmplitudeEntry>,
    residual_norm: f64,
    condition: Option<f64>,
    rank_deficient: bool,
    singular_values: Vec<f64>,
    row_residual_quantiles: Quantiles,
    dirichlet_tail_ratio: f64,
    max_f0_error: Option<f64>,
    max_neumann_error: Option<f64>,
    max_top_side_neumann_error: Option<f64>,
    timings: Timings,
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn quantiles(values: &[f64]) -> Quantiles {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let q = |p: f64| {
        if v.is_empty() {
            return 0.0;
        }
        let idx = p * (v.len() - 1) as f64;
        let (lo, hi) = (idx.floor() as usize, idx.ceil() as usize);
        v[lo] + (v[hi] - v[lo]) * (idx - lo as f64)
    };
    Quantiles { min: q(0.0), p25: q(0.25), median: q(0.5), p75: q(0.75), p90: q(0.9), max: q(1.0) }
}

fn phi_grid() -> impl Iterator<Item = f64> {
    (0..F0_POINTS).map(|k| 2.0 * std::f64::consts::PI * k as f64 / (F0_POINTS - 1) as f64)
}

fn t_grid() -> impl Iterator<Item = f64> {
    (0..TRACE_POINTS).map(|k| -1.0 + 2.0 * k as f64 / (TRACE_POINTS - 1) as f64)
}

fn dirichlet_data(run: &Run) -> Result<(DirichletData, Option<HankelSolution>)> {
    let beta = run.settings.beta;
    match &run.data {
        Data::Example(e) => {
            let sol = if *e == 1 { HankelSolution::example1(beta) } else { HankelSolution::example2(beta) };
            let g = &run.geometry;
            let d = DirichletData::project(g.sides(), run.dirichlet_modes, |j, t| sol.dirichlet_value(g, j, t))?;
            Ok((d, Some(sol)))
        }
        Data::Samples(values) => Ok((DirichletData::from_samples(values, run.dirichlet_modes)?, None)),
    }
}

/// Executes a validated run; artifacts are written only after a successful solve.
pub fn execute(run: &Run) -> Result<Finished, RunError> {
    let start = Instant::now();
    let (data, reference) = dirichlet_data(run).map_err(RunError::Config)?;
    let plan = CollocationPlan::from_options(&run.geometry, &run.plan);
    plan.validate(&run.geometry, run.settings.unknowns(run.geometry.sides()))
        .map_err(|e| RunError::Config(e.into()))?;
    let system = build_system(&run.geometry, &plan, &data, &run.settings).map_err(|e| RunError::Assembly(e.into()))?;
    let solved = solve_least_squares(&system).map_err(|e| RunError::Assembly(e.into()))?;
    let total = start.elapsed().as_secs_f64();
    write_artifacts(run, &data, reference.as_ref(), &solved, system.matrix.nrows(), total).map_err(RunError::Output)?;
    Ok(Finished { output: run.output.clone(), rank_deficient: solved.rank_deficient })
}

fn write_artifacts(
    run: &Run,
    data: &DirichletData,
    reference: Option<&HankelSolution>,
    solved: &SolveReport,
    rows: usize,
    total: f64,
) -> Result<()> {
    let out = &run.output;
    fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;
    let g = &run.geometry;

    let f0: Vec<(f64, Complex64)> = phi_grid().map(|p| (p, solved.amplitude.eval(Complex64::new(p, 0.0)))).collect();
    let f0_ref: Option<Vec<Complex64>> =
        reference.map(|s| phi_grid().map(|p| s.amplitude().eval(Complex64::new(p, 0.0))).collect());
    write_csv(&out.join("f0.csv"), "phi", &f0)?;
    write_plot(&out.join("f0.svg"), "scattering amplitude f0", "phi", &f0, f0_ref.as_deref())?;

    let mut max_neumann: Option<f64> = None;
    let mut top_side: Option<f64> = None;
    for j in 0..g.sides() {
        let trace: Vec<(f64, Complex64)> = t_grid().map(|t| (t, solved.neumann.eval(j, t))).collect();
        let exact: Option<Vec<Complex64>> = match reference {
            Some(s) => Some(t_grid().map(|t| s.neumann_value(g, j, t)).collect::<utx_core::Result<_>>()?),
            None => None,
        };
        if let Some(e) = &exact {
            let err = trace.iter().zip(e).map(|((_, a), b)| (a - b).norm()).fold(0.0, f64::max);
            max_neumann = Some(max_neumann.unwrap_or(0.0).max(err));
            if j == 0 {
                top_side = Some(err);
            }
        }
        write_csv(&out.join(format!("neumann_side_{j}.csv")), "t", &trace)?;
        write_plot(
            &out.join(format!("neumann_side_{j}.svg")),
            &format!("Neumann trace, side {j}"),
            "t",
            &trace,
            exact.as_deref(),
        )?;
    }
    let max_f0 = f0_ref.as_ref().map(|r| f0.iter().zip(r).map(|((_, a), b)| (a - b).norm()).fold(0.0, f64::max));

    let report = Report {
        beta: run.settings.beta,
        max_mode: run.settings.max_mode,
        amplitude_modes: run.settings.amplitude_modes,
        dirichlet_modes: run.dirichlet_modes,
        vertices: g.vertices().iter().copied().map(pair).collect(),
        example: match run.data {
            Data::Example(e) => Some(e),
            Data::Samples(_) => None,
        },
        rows,
        unknowns: run.settings.unknowns(g.sides()),
        neumann_coefficients: (0..g.sides()).map(|j| solved.neumann.side(j).iter().copied().map(pair).collect()).collect(),
        amplitude_coefficients: solved.amplitude.modes().map(|(k, v)| AmplitudeEntry { k, value: pair(v) }).collect(),
        residual_norm: solved.residual_norm,
        condition: solved.condition.is_finite().then_some(solved.condition),
        rank_deficient: solved.rank_deficient,
        singular_values: solved.singular_values.clone(),
        row_residual_quantiles: quantiles(&solved.row_residuals),
        dirichlet_tail_ratio: data.tail_ratio(),
        max_f0_error: max_f0,
        max_neumann_error: max_neumann,
        max_top_side_neumann_error: top_side,
        timings: Timings {
            assembly_s: solved.assembly_time.as_secs_f64(),
            solve_s: solved.solve_time.as_secs_f64(),
            total_s: total,
        },
    };
    let json = serde_json::to_string_pretty(&report)?;
    fs::write(out.join("report.json"), json + "\n").context("cannot write report.json")?;
    Ok(())
}

fn write_csv(path: &Path, x: &str, values: &[(f64, Complex64)]) -> Result<()> {
    let mut s = format!("{x},re,im\n");
    for (t, v) in values {
        s.push_str(&format!("{t:?},{:?},{:?}\n", v.re, v.im));
    }
    fs::write(path, s).with_context(|| format!("cannot write {}", path.display()))
}

fn write_plot(path: &Path, title: &str, x: &str, values: &[(f64, Complex64)], reference: Option<&[Complex64]>) -> Result<()> {
    let mut series = vec![
        Series { label: "Re computed", color: "#1f77b4", dashed: false, points: values.iter().map(|(t, v)| (*t, v.re)).collect() },
        Series { label: "Im computed", color: "#d62728", dashed: false, points: values.iter().map(|(t, v)| (*t, v.im)).collect() },
    ];
    if let Some(r) = reference {
        series.push(Series {
            label: "Re reference",
            color: "#1f77b4",
            dashed: true,
            points: values.iter().zip(r).map(|((t, _), v)| (*t, v.re)).collect(),
        });
        series.push(Series {
            label: "Im reference",
            color: "#d62728",
            dashed: true,
            points: values.iter().zip(r).map(|((t, _), v)| (*t, v.im)).collect(),
        });
    }
    fs::write(path, line_chart(title, x, &series)).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantile_interpolation() {
        let q = quantiles(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!((q.min, q.median, q.max), (1.0, 3.0, 5.0));
        assert_eq!(q.p25, 2.0);
        assert!((q.p90 - 4.6).abs() < 1e-12);
    }
}
