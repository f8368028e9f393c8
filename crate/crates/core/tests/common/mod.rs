#![allow(dead_code)]

use num_complex::Complex64;
use utx_core::geometry::PolygonGeometry;
use utx_core::quadrature::gauss_legendre;
use utx_core::reference::HankelSolution;
use utx_core::solver::SolveReport;
use utx_core::specfun::legendre_eval;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Composite Gauss-Legendre rule on `[a, b]`.
pub fn composite<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, panels: usize, nodes: usize) -> (Complex64, f64) {
    let (x, w) = gauss_legendre(nodes);
    let width = (b - a) / panels as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut abs = 0.0;
    for k in 0..panels {
        let lo = a + k as f64 * width;
        for (xi, wi) in x.iter().zip(&w) {
            let v = f(lo + 0.5 * width * (xi + 1.0)) * (0.5 * width * wi);
            sum += v;
            abs += v.norm();
        }
    }
    (sum, abs)
}

/// `∫ e^{-iΛx} P_m(x) dx` by brute-force quadrature, either directly or after `m`
/// integrations by parts, whichever has the smaller cancellation. Returns the value and
/// the conditioning `∫|integrand| / |value|` of the chosen form.
pub fn brute_flat_integral(lambda: Complex64, m: usize) -> (Complex64, f64) {
    let (direct, dabs) = composite(|x| (-I * lambda * x).exp() * legendre_eval(m, x), -1.0, 1.0, 64, 24);
    let mut pref = Complex64::new(1.0, 0.0);
    for k in 1..=m {
        pref *= I * lambda / (2.0 * k as f64);
    }
    let (rod, rabs) = composite(|x| (-I * lambda * x).exp() * (x * x - 1.0).powi(m as i32), -1.0, 1.0, 64, 24);
    let rod = rod * pref;
    let rabs = rabs * pref.norm();
    let dcond = dabs / direct.norm();
    let rcond = rabs / rod.norm();
    if dcond <= rcond {
        (direct, dcond)
    } else {
        (rod, rcond)
    }
}

/// Largest `|computed - exact|` Neumann error over `points` equispaced parameters per side.
pub fn neumann_error(report: &SolveReport, sol: &HankelSolution, geom: &PolygonGeometry, points: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..geom.sides() {
        for k in 0..points {
            let t = -1.0 + 2.0 * k as f64 / (points - 1) as f64;
            let exact = sol.neumann_value(geom, j, t).unwrap();
            worst = worst.max((report.neumann.eval(j, t) - exact).norm());
        }
    }
    worst
}

/// Largest amplitude error on `points` equispaced angles in `[0, 2π]`.
pub fn amplitude_error(report: &SolveReport, sol: &HankelSolution, points: usize) -> f64 {
    let exact = sol.amplitude();
    (0..points)
        .map(|k| {
            let phi = c(2.0 * std::f64::consts::PI * k as f64 / (points - 1) as f64, 0.0);
            (report.amplitude.eval(phi) - exact.eval(phi)).norm()
        })
        .fold(0.0, f64::max)
}

/// Symbolic residues at `λ = -1` of `e^{-iβc(λ - 1/λ)} / ((-λ + 1/λ)^{p+1} λ)`, `c = t₀ + σ`,
/// obtained by differentiating `e^{E} λ^p / (1 - λ)^{p+1}` by hand.
pub fn side_one_residue(p: u32, beta: f64, c: f64) -> Complex64 {
    match p {
        0 => Complex64::new(0.5, 0.0),
        1 => I * beta * c / 2.0,
        2 => Complex64::new(-1.0 / 16.0 - beta * beta * c * c / 4.0, 0.0),
        _ => unimplemented!("hand-derived residues exist for p <= 2"),
    }
}
