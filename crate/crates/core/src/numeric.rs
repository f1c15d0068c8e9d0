//! Closed-form oscillatory integrals shared by the slice arithmetic and the
//! sinc-kernel formulas.

use num_complex::Complex64;
use std::f64::consts::PI;

pub const TWO_PI: f64 = 2.0 * PI;

/// `e^{2πi x}`.
#[inline]
pub fn cis2pi(x: f64) -> Complex64 {
    // Reduce first so large arguments (supports near 1/λ) keep full accuracy.
    let r = x - x.round();
    Complex64::from_polar(1.0, TWO_PI * r)
}

/// `e^{iθ}`.
#[inline]
pub fn cis(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

const SERIES_CUTOFF: f64 = 0.5;

/// Moments `M_n(θ) = ∫₀¹ uⁿ e^{iθu} du` for `n = 0, 1, 2`.
pub fn moments(theta: f64) -> [Complex64; 3] {
    if theta.abs() <= SERIES_CUTOFF {
        // Σ_j (iθ)^j / (j! (n+j+1))
        let mut out = [Complex64::new(0.0, 0.0); 3];
        let mut term = Complex64::new(1.0, 0.0);
        let it = Complex64::new(0.0, theta);
        for j in 0..30 {
            let jf = j as f64;
            for (n, slot) in out.iter_mut().enumerate() {
                *slot += term / (n as f64 + jf + 1.0);
            }
            term = term * it / (jf + 1.0);
            if term.norm() < 1e-18 {
                break;
            }
        }
        out
    } else {
        let e = cis(theta);
        let it = Complex64::new(0.0, theta);
        let m0 = (e - 1.0) / it;
        let m1 = (e - m0) / it;
        let m2 = (e - 2.0 * m1) / it;
        [m0, m1, m2]
    }
}

/// `(e^{iθ} - 1)/(iθ)`, with the limit value 1 at `θ = 0`.
#[inline]
pub fn phase_sinc(theta: f64) -> Complex64 {
    moments(theta)[0]
}

/// `∫₀ᴸ (c₀ + c₁τ + c₂τ²) e^{iωτ} dτ`.
pub fn poly_exp_integral(coeffs: [Complex64; 3], omega: f64, len: f64) -> Complex64 {
    if len <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let m = moments(omega * len);
    coeffs[0] * m[0] * len + coeffs[1] * m[1] * len * len + coeffs[2] * m[2] * len * len * len
}

/// Fourier transform of an interval indicator in the convention
/// `f̂(s) = ∫ f(t) e^{2πist} dt`; zero for empty intervals.
pub fn indicator_hat(lo: f64, hi: f64, s: f64) -> Complex64 {
    if hi <= lo {
        return Complex64::new(0.0, 0.0);
    }
    let len = hi - lo;
    cis2pi(s * lo) * phase_sinc(TWO_PI * s * len) * len
}

/// Neumaier-compensated complex sum over an ordered sequence.
pub fn compensated_sum<I: IntoIterator<Item = Complex64>>(iter: I) -> Complex64 {
    let (mut sr, mut cr, mut si, mut ci) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for z in iter {
        let t = sr + z.re;
        if sr.abs() >= z.re.abs() {
            cr += (sr - t) + z.re;
        } else {
            cr += (z.re - t) + sr;
        }
        sr = t;
        let t = si + z.im;
        if si.abs() >= z.im.abs() {
            ci += (si - t) + z.im;
        } else {
            ci += (z.im - t) + si;
        }
        si = t;
    }
    Complex64::new(sr + cr, si + ci)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, by Newton iteration on
/// the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            // p1 = P_n(x), p2 = P_{n-1}(x)
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * x * p2 - (jf - 1.0) * p3) / jf;
            }
            dp = n as f64 * (x * p1 - p2) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre rule for a complex integrand on `[a, b]`.
pub fn integrate_gl<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Complex64 {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for (x, w) in xs.iter().zip(&ws) {
            acc += f(mid + 0.5 * h * x) * (w * 0.5 * h);
        }
    }
    acc
}
