//! The `verify-examples` oracle suite.

use std::f64::consts::PI;

use clap::ValueEnum;
use num_complex::Complex64;
use rayon::prelude::*;
use utx_core::contourquad::{
    crossing_sign, deformed_integral_with_crossing, indented_ray_integral, kernel_residue, ray_integral, DetourSide,
    QuadParams,
};
use utx_core::geometry::PolygonGeometry;
use utx_core::reference::HankelSolution;
use utx_core::solver::{solve, SolverSettings};
use utx_core::supplement::{q_setup, supplementary_relation, EvalPoint, KernelRoute, QKernelRequest};
use utx_core::transforms::{global_residual, uhat_dirichlet, uhat_neumann, Relation};

use crate::checks::Check;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    GlobalRelation,
    Deformation,
    SideLimit,
    Examples,
}

impl Suite {
    fn label(self) -> &'static str {
        match self {
            Self::GlobalRelation => "global-relation",
            Self::Deformation => "deformation",
            Self::SideLimit => "side-limit",
            Self::Examples => "examples",
        }
    }
}

fn examples() -> [(&'static str, HankelSolution); 2] {
    [("example 1", HankelSolution::example1(1.0)), ("example 2", HankelSolution::example2(1.0))]
}

fn global_relation() -> Vec<Check> {
    let suite = Suite::GlobalRelation.label();
    let g = PolygonGeometry::square();
    let beta = 1.0;
    examples()
        .into_iter()
        .map(|(name, sol)| {
            let run = || -> utx_core::Result<f64> {
                let (d, n) = sol.traces(&g, 24)?;
                let a = sol.amplitude();
                let mut worst: f64 = 0.0;
                for k in 0..64 {
                    let l = Complex64::from_polar(1.0, 2.0 * PI * (k as f64 + 0.5) / 64.0);
                    if [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), I, -I].iter().any(|z| (l - z).norm() < 0.1) {
                        continue;
                    }
                    let mut scale: f64 = 0.0;
                    for j in 0..4 {
                        scale = scale.max((uhat_dirichlet(&g, j, l, &d, beta)? + uhat_neumann(&g, j, l, &n, beta)?).norm());
                    }
                    worst = worst.max(global_residual(&g, l, &n, &a, &d, beta, Relation::Exterior)?.norm() / scale);
                }
                Ok(worst)
            };
            match run() {
                Ok(v) => Check::new(suite, format!("{name}: exterior relation, exact traces"), v, 1e-6),
                Err(e) => Check::failed(suite, name, e),
            }
        })
        .collect()
}

fn deformation(quad: &QuadParams) -> Vec<Check> {
    let suite = Suite::Deformation.label();
    let g = PolygonGeometry::square();
    let beta = 1.0;
    let mut cases = Vec::new();
    for j in 0..4 {
        for j0 in 0..4 {
            for t0 in [-0.8, 0.0, 0.8] {
                for sigma in [1i8, -1] {
                    for p in 0..=8u32 {
                        cases.push((j, j0, t0, sigma, p));
                    }
                }
            }
        }
    }
    let results: Vec<utx_core::Result<(f64, f64)>> = cases
        .par_iter()
        .map(|&(j, j0, t0, sigma, p)| {
            let at = EvalPoint::Boundary(g.side_point(j0, t0)?);
            let req = QKernelRequest { p, side: j, at, sigma, prefactor: false };
            let (k, plan) = q_setup(&g, beta, &req, DetourSide::Right, quad)?;
            let deformed = deformed_integral_with_crossing(&k, plan.base_angle, plan.deformed_angle, plan.detour, quad)?;
            let half = plan.base_angle + 0.5 * plan.sweep();
            let mut alt = ray_integral(&k, half, quad)?;
            for pole in k.poles() {
                alt += 2.0 * PI * I * crossing_sign(pole, plan.base_angle, half, plan.detour) * kernel_residue(&k, pole, quad);
            }
            let oracle = indented_ray_integral(&k, &plan, quad)?;
            Ok(((deformed - alt).norm(), (deformed - oracle).norm()))
        })
        .collect();
    let mut half: f64 = 0.0;
    let mut oracle: f64 = 0.0;
    for r in results {
        match r {
            Ok((a, b)) => {
                half = half.max(a);
                oracle = oracle.max(b);
            }
            Err(e) => return vec![Check::failed(suite, "kernel integrals", e)],
        }
    }
    let n = cases.len();
    vec![
        Check::new(suite, format!("{n} kernels: half-angle deformation"), half, 1e-9),
        Check::new(suite, format!("{n} kernels: indented base-ray oracle"), oracle, 1e-4),
    ]
}

fn side_limit(quad: &QuadParams) -> Vec<Check> {
    let suite = Suite::SideLimit.label();
    let g = PolygonGeometry::square();
    examples()
        .into_iter()
        .map(|(name, sol)| {
            let run = || -> utx_core::Result<f64> {
                let (d, n) = sol.traces(&g, 16)?;
                let mut worst: f64 = 0.0;
                for j0 in 0..4 {
                    for t0 in [-0.8, -0.4, 0.0, 0.4, 0.8] {
                        let at = EvalPoint::Boundary(g.side_point(j0, t0)?);
                        let r = supplementary_relation(&g, sol.beta, &at, &d, &n, quad, KernelRoute::Direct)?;
                        worst = worst.max(r.norm());
                    }
                }
                Ok(worst)
            };
            match run() {
                Ok(v) => Check::new(suite, format!("{name}: boundary-limit residual, exact traces"), v, 1e-5),
                Err(e) => Check::failed(suite, name, e),
            }
        })
        .collect()
}

fn end_to_end(quad: &QuadParams) -> Vec<Check> {
    let suite = Suite::Examples.label();
    let g = PolygonGeometry::square();
    let mut out = Vec::new();
    for ((name, sol), (neu_tol, amp_tol)) in examples().into_iter().zip([(5e-4, 1e-3), (5e-3, 1e-2)]) {
        let settings = SolverSettings { quad: *quad, ..SolverSettings::new(1.0, 8, 8) };
        let run = || -> utx_core::Result<(f64, f64)> {
            let (d, _) = sol.traces(&g, settings.max_mode + 4)?;
            let rep = solve(&g, &d, &settings)?;
            let mut neu: f64 = 0.0;
            for j in 0..4 {
                for k in 0..201 {
                    let t = -1.0 + k as f64 / 100.0;
                    neu = neu.max((rep.neumann.eval(j, t) - sol.neumann_value(&g, j, t)?).norm());
                }
            }
            let exact = sol.amplitude();
            let amp = (0..361)
                .map(|k| {
                    let phi = Complex64::new(2.0 * PI * k as f64 / 360.0, 0.0);
                    (rep.amplitude.eval(phi) - exact.eval(phi)).norm()
                })
                .fold(0.0, f64::max);
            Ok((neu, amp))
        };
        match run() {
            Ok((neu, amp)) => {
                out.push(Check::new(suite, format!("{name}: Neumann trace error"), neu, neu_tol));
                out.push(Check::new(suite, format!("{name}: amplitude error"), amp, amp_tol));
            }
            Err(e) => out.push(Check::failed(suite, name, e)),
        }
    }
    out
}

/// Runs the selected suites (all when `only` is `None`).
pub fn run(only: Option<Suite>, quad: &QuadParams) -> Vec<Check> {
    let suites = [Suite::GlobalRelation, Suite::Deformation, Suite::SideLimit, Suite::Examples];
    suites
        .into_iter()
        .filter(|s| only.is_none_or(|o| o == *s))
        .flat_map(|s| match s {
            Suite::GlobalRelation => global_relation(),
            Suite::Deformation => deformation(quad),
            Suite::SideLimit => side_limit(quad),
            Suite::Examples => end_to_end(quad),
        })
        .collect()
}
