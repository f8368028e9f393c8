//! The `selftest` quadrature and special-function suites.

use std::f64::consts::PI;

use num_complex::Complex64;
use utx_core::contourquad::{circle_residue, ray_integral, KernelIntegrand, QuadParams};
use utx_core::quadrature::{adaptive_kronrod, gauss_legendre, tanh_sinh};
use utx_core::specfun::{
    bessel_k, legendre_eval, legendre_flat_integral, legendre_flat_integral_closed, legendre_flat_integral_series,
    series_threshold,
};

use crate::checks::Check;

const QUAD: &str = "quadrature";
const SPECFUN: &str = "special-functions";

fn quadrature() -> Vec<Check> {
    let mut out = Vec::new();
    let (x, w) = gauss_legendre(13);
    let poly: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(24)).sum();
    out.push(Check::new(QUAD, "13-point Gauss-Legendre, x^24", (poly - 2.0 / 25.0).abs(), 1e-14));
    let log = tanh_sinh(|_, dl, _, o| o[0] = dl.ln(), 0.0, 1.0, 1, 1e-12)[0];
    out.push(Check::new(QUAD, "tanh-sinh, endpoint log singularity", (log + 1.0).abs(), 1e-10));
    let sin = adaptive_kronrod(|x, o| o[0] = Complex64::new(x.sin(), 0.0), 0.0, PI, 1, 1e-13, 100)[0];
    out.push(Check::new(QUAD, "adaptive Gauss-Kronrod, sin on [0, pi]", (sin - 2.0).norm(), 1e-12));
    let res = circle_residue(|l| l.exp() / (l * l), Complex64::new(0.0, 0.0), 0.5, 128);
    out.push(Check::new(QUAD, "circle residue of e^z / z^2", (res - 1.0).norm(), 1e-14));
    let f = KernelIntegrand {
        beta: 1.0,
        a: Complex64::new(0.0, 1.0),
        b: Complex64::new(0.0, 1.0),
        halfside: Complex64::new(1.0, 0.0),
        power: 0,
        prefactor: false,
    };
    match (ray_integral(&f, 0.3, &QuadParams::default()), bessel_k(0, 2.0)) {
        (Ok(v), Ok(k)) => out.push(Check::new(QUAD, "ray integral of exp(-(lambda + 1/lambda))", (v - 2.0 * k).norm(), 1e-12)),
        (Err(e), _) | (_, Err(e)) => out.push(Check::failed(QUAD, "ray integral", e)),
    }
    out
}

/// `K_ν(x) = ∫_0^∞ e^{-x cosh t} cosh(νt) dt` by the trapezoid rule.
fn bessel_by_integral(nu: usize, x: f64) -> f64 {
    let h = 0.004;
    let mut sum = 0.5 * (-x).exp();
    let mut k = 1;
    loop {
        let t = k as f64 * h;
        sum += (-x * t.cosh()).exp() * (nu as f64 * t).cosh();
        if x * t.cosh() - nu as f64 * t > 60.0 + x {
            break;
        }
        k += 1;
    }
    sum * h
}

/// `∫ e^{-iΛt} P_m(t) dt` and `∫ |e^{-iΛt} P_m(t)| dt` by composite Gauss-Legendre.
fn flat_by_quadrature(lambda: Complex64, m: usize) -> (Complex64, f64) {
    let (x, w) = gauss_legendre(40);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for panel in 0..16 {
        let lo = -1.0 + panel as f64 / 8.0;
        for (xi, wi) in x.iter().zip(&w) {
            let t = lo + (xi + 1.0) / 16.0;
            let v = (-Complex64::new(0.0, 1.0) * lambda * t).exp() * legendre_eval(m, t) * (wi / 16.0);
            sum += v;
            mass += v.norm();
        }
    }
    (sum, mass)
}

fn special_functions() -> Vec<Check> {
    let mut out = Vec::new();
    let quoted = [(0, 0.113_893_872_749_533_4), (1, 0.139_865_881_816_522_4)];
    for (nu, want) in quoted {
        match bessel_k(nu, 2.0) {
            Ok(v) => out.push(Check::new(SPECFUN, format!("K_{nu}(2) tabulated"), (v - want).abs(), 1e-14)),
            Err(e) => out.push(Check::failed(SPECFUN, format!("K_{nu}(2)"), e)),
        }
    }
    let mut worst: f64 = 0.0;
    for nu in [0, 1, 3, 7, 10] {
        for x in [0.5, 1.9, 2.1, 8.0, 30.0] {
            let exact = bessel_by_integral(nu, x);
            worst = worst.max(bessel_k(nu, x).map_or(f64::NAN, |v| (v - exact).abs() / exact));
        }
    }
    out.push(Check::new(SPECFUN, "K_nu vs integral representation (relative)", worst, 1e-10));
    let mut worst: f64 = 0.0;
    for m in [0, 1, 4, 8, 12] {
        for (r, a) in [(0.7, 0.3), (3.0, -1.2), (9.0, 2.0)] {
            let l = Complex64::from_polar(r, a);
            let (exact, mass) = flat_by_quadrature(l, m);
            worst = worst.max((legendre_flat_integral(l, m) - exact).norm() / mass);
        }
    }
    out.push(Check::new(SPECFUN, "Fourier-Legendre integral vs quadrature (scaled)", worst, 1e-13));
    let mut jump: f64 = 0.0;
    for m in 0..=12 {
        let l = Complex64::from_polar(series_threshold(m), 0.4);
        let a = legendre_flat_integral_series(l, m);
        jump = jump.max((a - legendre_flat_integral_closed(l, m)).norm() / a.norm());
    }
    out.push(Check::new(SPECFUN, "series and closed form agree at the switch", jump, 1e-9));
    out
}

pub fn run() -> Vec<Check> {
    let mut out = quadrature();
    out.extend(special_functions());
    out
}
