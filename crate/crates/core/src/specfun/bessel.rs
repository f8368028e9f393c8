//! Modified Bessel functions of the second kind for integer order.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// `(K_0(x), K_1(x))` by the ascending series for small `x`.
fn k01_series(x: f64) -> (f64, f64) {
    let y = x * x / 4.0;
    let l = (x / 2.0).ln() + EULER_GAMMA;
    // K0 = -(ln(x/2)+γ) I0 + Σ H_k y^k/(k!)^2
    // K1 = 1/x + (ln(x/2)+γ) I1 - (x/4) Σ (H_k + H_{k+1}) y^k/(k!(k+1)!)
    let mut t0 = 1.0;
    let mut t1 = 1.0;
    let mut harm = 0.0;
    let mut i0 = 0.0;
    let mut s0 = 0.0;
    let mut i1 = 0.0;
    let mut s1 = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        if k > 0 {
            t0 *= y / (kf * kf);
            t1 *= y / (kf * (kf + 1.0));
            harm += 1.0 / kf;
        }
        i0 += t0;
        s0 += harm * t0;
        i1 += t1;
        s1 += (2.0 * harm + 1.0 / (kf + 1.0)) * t1;
        if t0 < 1e-18 * i0 && k > 2 {
            break;
        }
    }
    let k0 = -l * i0 + s0;
    let k1 = 1.0 / x + l * (x / 2.0) * i1 - (x / 4.0) * s1;
    (k0, k1)
}

/// `(K_0(x), K_1(x))` by Steed's continued fraction, for `x >= 2`.
fn k01_fraction(x: f64) -> (f64, f64) {
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + 0.5 - h) / x;
    (k0, k1)
}

fn k01(x: f64) -> (f64, f64) {
    if x <= 2.0 {
        k01_series(x)
    } else {
        k01_fraction(x)
    }
}

/// `[K_0(x), ..., K_nmax(x)]` with upward recurrence from `K_0`, `K_1`.
pub fn bessel_k_upto(nmax: usize, x: f64) -> Result<Vec<f64>> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::NonPositiveArgument(x));
    }
    let (k0, k1) = k01(x);
    let mut out = Vec::with_capacity(nmax + 2);
    out.push(k0);
    out.push(k1);
    for n in 1..nmax {
        let next = out[n - 1] + 2.0 * n as f64 / x * out[n];
        out.push(next);
    }
    out.truncate(nmax + 1);
    Ok(out)
}

/// `K_ν(x)` for integer `ν >= 0` and `x > 0`.
pub fn bessel_k(nu: usize, x: f64) -> Result<f64> {
    Ok(bessel_k_upto(nu, x)?[nu])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert!((bessel_k(0, 2.0).unwrap() - 0.113_893_872_749_533_4).abs() < 1e-15);
        assert!((bessel_k(1, 2.0).unwrap() - 0.139_865_881_816_522_4).abs() < 1e-15);
        assert!((bessel_k(0, 1.0).unwrap() - 0.421_024_438_240_708_3).abs() < 1e-15);
        assert!((bessel_k(1, 1.0).unwrap() - 0.601_907_230_197_234_6).abs() < 1e-15);
    }

    #[test]
    fn branches_agree_at_switch() {
        for &x in &[1.9, 2.0, 2.1] {
            let (a0, a1) = k01_series(x);
            let (b0, b1) = k01_fraction(x);
            assert!((a0 - b0).abs() < 1e-14 * a0, "{x}");
            assert!((a1 - b1).abs() < 1e-14 * a1, "{x}");
        }
    }

    #[test]
    fn recurrence_identity() {
        for &x in &[0.3, 1.0, 2.0, 7.5, 30.0] {
            let k = bessel_k_upto(2, x).unwrap();
            assert!((k[2] - (k[0] + 2.0 / x * k[1])).abs() <= 1e-12 * k[2]);
        }
    }

    #[test]
    fn rejects_nonpositive() {
        assert_eq!(bessel_k(0, 0.0), Err(Error::NonPositiveArgument(0.0)));
        assert!(bessel_k(1, -1.0).is_err());
    }
}
