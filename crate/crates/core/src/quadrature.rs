//! Real-line quadrature rules used by the kernels and the contour oracles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
    }
    (x, w)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * z * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (z * p1 - p0) / (z * z - 1.0))
}

/// Vector-valued tanh-sinh quadrature on `[a, b]`.
///
/// The closure receives `(x, x - a, b - x, out)` with the endpoint distances computed
/// without cancellation, so integrands with endpoint singularities can be handled. Values
/// are accumulated into `out`, which has length `dim`.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, dim: usize, tol: f64) -> Vec<f64>
where
    F: FnMut(f64, f64, f64, &mut [f64]),
{
    let d = 0.5 * (b - a);
    let mut buf = vec![0.0; dim];
    let mut acc = vec![0.0; dim];
    let mut eval = |t: f64, acc: &mut [f64]| -> bool {
        let u = 0.5 * PI * t.sinh();
        let ch = u.cosh();
        let w = d * 0.5 * PI * t.cosh() / (ch * ch);
        let dl = 2.0 * d / (1.0 + (-2.0 * u).exp());
        let dr = 2.0 * d / (1.0 + (2.0 * u).exp());
        if dl <= 0.0 || dr <= 0.0 || w < 1e-300 {
            return false;
        }
        let x = if u < 0.0 { a + dl } else { b - dr };
        let x = x.clamp(a, b);
        buf.iter_mut().for_each(|v| *v = 0.0);
        f(x, dl, dr, &mut buf);
        for (s, v) in acc.iter_mut().zip(&buf) {
            *s += w * v;
        }
        true
    };
    let tmax = 4.0;
    let mut h = 0.5;
    eval(0.0, &mut acc);
    let mut k = 1;
    while (k as f64) * h <= tmax {
        let t = k as f64 * h;
        eval(t, &mut acc);
        eval(-t, &mut acc);
        k += 1;
    }
    let mut prev: Vec<f64> = acc.iter().map(|s| s * h).collect();
    for _ in 0..10 {
        h *= 0.5;
        let mut k = 1;
        while (k as f64) * h <= tmax {
            let t = k as f64 * h;
            eval(t, &mut acc);
            eval(-t, &mut acc);
            k += 2;
        }
        let cur: Vec<f64> = acc.iter().map(|s| s * h).collect();
        let scale = cur.iter().fold(1e-300_f64, |m, v| m.max(v.abs()));
        let diff = cur.iter().zip(&prev).fold(0.0_f64, |m, (x, y)| m.max((x - y).abs()));
        prev = cur;
        if diff <= tol * scale {
            break;
        }
    }
    prev
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

struct Segment {
    a: f64,
    b: f64,
    value: Vec<Complex64>,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod_segment<F>(f: &mut F, a: f64, b: f64, dim: usize) -> Segment
where
    F: FnMut(f64, &mut [Complex64]),
{
    let c = 0.5 * (a + b);
    let d = 0.5 * (b - a);
    let mut k = vec![Complex64::new(0.0, 0.0); dim];
    let mut g = vec![Complex64::new(0.0, 0.0); dim];
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    for i in 0..8 {
        let xs: &[f64] = if i == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for &s in xs {
            buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            f(c + s * d * XGK[i], &mut buf);
            for q in 0..dim {
                k[q] += buf[q] * WGK[i];
                if i % 2 == 1 {
                    g[q] += buf[q] * WG[i / 2];
                }
            }
        }
    }
    let error = k.iter().zip(&g).fold(0.0_f64, |m, (x, y)| m.max((x - y).norm())) * d.abs();
    let value = k.into_iter().map(|v| v * d).collect();
    Segment { a, b, value, error }
}

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of a complex vector-valued integrand.
///
/// Subdivides the worst segment until the summed error estimate is below `abs_tol`
/// or `max_segments` is reached.
pub fn adaptive_kronrod<F>(mut f: F, a: f64, b: f64, dim: usize, abs_tol: f64, max_segments: usize) -> Vec<Complex64>
where
    F: FnMut(f64, &mut [Complex64]),
{
    let mut heap = BinaryHeap::new();
    let first = kronrod_segment(&mut f, a, b, dim);
    let mut total_err = first.error;
    heap.push(first);
    while total_err > abs_tol && heap.len() < max_segments {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            break;
        }
        let left = kronrod_segment(&mut f, worst.a, mid, dim);
        let right = kronrod_segment(&mut f, mid, worst.b, dim);
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for seg in heap.into_vec() {
        for (o, v) in out.iter_mut().zip(seg.value) {
            *o += v;
        }
    }
    out
}
