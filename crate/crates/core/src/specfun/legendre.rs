/// `P_m(t)` by the three-term recurrence.
pub fn legendre_eval(m: usize, t: f64) -> f64 {
    let mut p0 = 1.0;
    if m == 0 {
        return p0;
    }
    let mut p1 = t;
    for k in 1..m {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * t * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// `[P_0(t), ..., P_mmax(t)]`.
pub fn legendre_upto(mmax: usize, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(mmax + 1);
    out.push(1.0);
    if mmax >= 1 {
        out.push(t);
    }
    for k in 1..mmax {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * t * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    out
}
