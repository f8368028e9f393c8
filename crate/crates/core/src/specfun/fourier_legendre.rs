//! `F_m(Λ) = ∫_{-1}^{1} e^{-iΛx} P_m(x) dx` in closed form and by its Taylor-moment series.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest order for which [`FourierLegendreCoeffs`] tables are built.
pub const MAX_ORDER: usize = 24;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `(-i)^k`.
fn neg_i_pow(k: usize) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// Magnitudes `(m+p)! / (2^p p! (m-p)!)` for `p = 0..=m`.
fn magnitudes(m: usize) -> impl Iterator<Item = f64> {
    (0..=m).scan(1.0_f64, move |c, p| {
        let out = *c;
        *c *= ((m + p + 1) * (m - p)) as f64 / (2 * (p + 1)) as f64;
        Some(out)
    })
}

fn coeff_a(m: usize, p: usize, mag: f64) -> Complex64 {
    let sign = if (m + p).is_multiple_of(2) { 1.0 } else { -1.0 };
    neg_i_pow(p + 1) * (sign * mag)
}

fn coeff_b(p: usize, mag: f64) -> Complex64 {
    neg_i_pow(p + 1) * (-mag)
}

/// Coefficients `A_mp`, `B_mp` with
/// `F_m(Λ) = Σ_p (A_mp e^{iΛ} + B_mp e^{-iΛ}) / Λ^{p+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierLegendreCoeffs {
    order: usize,
    a: Vec<Complex64>,
    b: Vec<Complex64>,
}

impl FourierLegendreCoeffs {
    pub fn new(m: usize) -> Result<Self> {
        if m > MAX_ORDER {
            return Err(Error::OrderTooLarge { order: m, max: MAX_ORDER });
        }
        let (a, b) = magnitudes(m)
            .enumerate()
            .map(|(p, mag)| (coeff_a(m, p, mag), coeff_b(p, mag)))
            .unzip();
        Ok(Self { order: m, a, b })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    pub fn b(&self) -> &[Complex64] {
        &self.b
    }
}

/// Below this modulus of `Λ` the moment series is used for order `m`.
pub fn series_threshold(m: usize) -> f64 {
    (m as f64).max(0.2)
}

/// `μ_{k,m} = ∫_{-1}^{1} x^k P_m(x) dx`.
pub fn legendre_moment(k: usize, m: usize) -> f64 {
    if k < m || (k - m) % 2 == 1 {
        return 0.0;
    }
    let mut mu = 2.0;
    for j in 0..m {
        mu *= (j + 1) as f64 / (2 * j + 3) as f64;
    }
    let mut kk = m;
    while kk < k {
        mu *= moment_ratio(kk, m);
        kk += 2;
    }
    mu
}

/// `μ_{k+2,m} / μ_{k,m}`.
fn moment_ratio(k: usize, m: usize) -> f64 {
    let num = ((k + 2) * (k + 1)) as f64 * ((k + m) / 2 + 1) as f64;
    let den = ((k - m) / 2 + 1) as f64 * ((k + m + 3) * (k + m + 2)) as f64;
    num / den
}

fn series(lambda: Complex64, m: usize) -> Complex64 {
    let mut mu = 2.0;
    for j in 0..m {
        mu *= (j + 1) as f64 / (2 * j + 3) as f64;
    }
    let mut fact = 1.0;
    for j in 2..=m {
        fact *= j as f64;
    }
    let mut term = (-I * lambda).powu(m as u32) * (mu / fact);
    let mut sum = term;
    let step = -lambda * lambda;
    let size = lambda.norm();
    let mut k = m;
    for _ in 0..400 {
        let kf = |x: usize| x as f64;
        term *= step * (kf((k + m) / 2 + 1) / (kf((k - m) / 2 + 1) * kf(k + m + 3) * kf(k + m + 2)));
        sum += term;
        k += 2;
        if kf(k) > size && term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn closed_form_scaled(lambda: Complex64, m: usize, shift: Complex64) -> Complex64 {
    let ep = (shift + I * lambda).exp();
    let em = (shift - I * lambda).exp();
    let inv = lambda.inv();
    let mut pw = inv;
    let mut sa = Complex64::new(0.0, 0.0);
    let mut sb = Complex64::new(0.0, 0.0);
    for (p, mag) in magnitudes(m).enumerate() {
        sa += coeff_a(m, p, mag) * pw;
        sb += coeff_b(p, mag) * pw;
        pw *= inv;
    }
    ep * sa + em * sb
}

/// `F_m(Λ)` from the Taylor-moment series alone.
pub fn legendre_flat_integral_series(lambda: Complex64, m: usize) -> Complex64 {
    series(lambda, m)
}

/// `F_m(Λ)` from the closed form alone; loses accuracy for `|Λ|` small compared to `m`.
pub fn legendre_flat_integral_closed(lambda: Complex64, m: usize) -> Complex64 {
    closed_form_scaled(lambda, m, Complex64::new(0.0, 0.0))
}

/// `F_m(Λ)` for any complex `Λ`, including `Λ = 0`.
pub fn legendre_flat_integral(lambda: Complex64, m: usize) -> Complex64 {
    legendre_flat_integral_scaled(lambda, m, Complex64::new(0.0, 0.0))
}

/// `e^{shift} F_m(Λ)`, combining the exponentials so that a large `shift`
/// cancelling against `±iΛ` does not overflow.
pub fn legendre_flat_integral_scaled(lambda: Complex64, m: usize, shift: Complex64) -> Complex64 {
    if lambda.norm() < series_threshold(m) {
        shift.exp() * series(lambda, m)
    } else {
        closed_form_scaled(lambda, m, shift)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_order_coefficients() {
        let f0 = FourierLegendreCoeffs::new(0).unwrap();
        assert_eq!(f0.a()[0], c(0.0, -1.0));
        assert_eq!(f0.b()[0], c(0.0, 1.0));
        let f1 = FourierLegendreCoeffs::new(1).unwrap();
        assert_eq!(f1.a()[0], c(0.0, 1.0));
        assert_eq!(f1.b()[0], c(0.0, 1.0));
    }

    #[test]
    fn sign_structure() {
        for m in 0..=MAX_ORDER {
            let f = FourierLegendreCoeffs::new(m).unwrap();
            for p in 0..=m {
                let s = if (m + p + 1) % 2 == 0 { 1.0 } else { -1.0 };
                assert_eq!(f.a()[p], f.b()[p] * s);
            }
        }
        assert!(matches!(FourierLegendreCoeffs::new(25), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn magnitudes_match_factorials() {
        let fact = |n: usize| (1..=n).map(|k| k as f64).product::<f64>();
        for m in 0..=12 {
            for (p, mag) in magnitudes(m).enumerate() {
                let exact = fact(m + p) / (2f64.powi(p as i32) * fact(p) * fact(m - p));
                assert!((mag - exact).abs() <= 1e-14 * exact);
            }
        }
    }

    #[test]
    fn limits_and_simple_values() {
        assert!((legendre_flat_integral(c(0.0, 0.0), 0) - 2.0).norm() < 1e-15);
        assert!((legendre_flat_integral(c(1e-9, 0.0), 0) - 2.0).norm() < 1e-15);
        for m in 1..8 {
            assert_eq!(legendre_flat_integral(c(0.0, 0.0), m), c(0.0, 0.0));
        }
        let v = legendre_flat_integral(c(PI / 2.0, 0.0), 0);
        assert!((v - 4.0 / PI).norm() < 1e-14);
    }

    #[test]
    fn moments() {
        assert!((legendre_moment(0, 0) - 2.0).abs() < 1e-15);
        assert!((legendre_moment(2, 0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((legendre_moment(2, 2) - 4.0 / 15.0).abs() < 1e-15);
        assert!((legendre_moment(4, 2) - 8.0 / 35.0).abs() < 1e-15);
        assert_eq!(legendre_moment(3, 2), 0.0);
        assert_eq!(legendre_moment(1, 2), 0.0);
    }

    #[test]
    fn scaled_matches_unscaled() {
        let shift = c(3.0, -1.0);
        for m in 0..10 {
            for &l in &[c(0.1, 0.05), c(2.0, 1.0), c(-7.0, 3.0)] {
                let a = legendre_flat_integral_scaled(l, m, shift);
                let b = shift.exp() * legendre_flat_integral(l, m);
                assert!((a - b).norm() <= 1e-13 * b.norm().max(1e-300));
            }
        }
    }

    #[test]
    fn scaled_avoids_overflow() {
        let l = c(0.0, -800.0);
        let v = legendre_flat_integral_scaled(l, 3, c(-800.0, 0.0));
        assert!(v.is_finite());
        assert!(v.norm() > 0.0);
    }
}
