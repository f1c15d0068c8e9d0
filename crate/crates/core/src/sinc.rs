//! The sinc-type kernel of the canonical field,
//!
//! ```text
//! S(x, y, z) = ∫ ⟨e_λ, π_λ(x,y,z) e_λ⟩ |λ| dλ = S₀ + S₁,
//! S₀(x,y,z) = ∫ F_{x,y}(λ) e^{-2πiλz} dλ,   F_{x,y}(λ) = −λ 1_{[−1,0]}(λ) 1̂_{J_x}(λy),
//! S₁(x,y,z) = ∫ G_{x,y}(λ) e^{-2πiλz} dλ,   G_{x,y}(λ) =  λ 1_{[0,1]}(λ)  1̂_{I_{x,λ}}(λy),
//! ```
//!
//! with `1̂(s) = ∫ 1(t) e^{2πist} dt`. Closed forms are written with
//! `M(w) = (e^{2πiw} − 1)/(2πiw)` and `N(w) = M(−w)`, both equal to 1 at 0,
//! which covers every exceptional line where a denominator vanishes.
//!
//! Two readings are available. [`Reading::AsPrinted`] is the published
//! formula: its `S₀` carries the opposite overall sign, and its `I_{x,λ}` is
//! built from `[−1/λ − 1, 1/λ]`. [`Reading::Corrected`] is what the defining
//! integral gives for the field `e_λ = 1_{[1/λ−1, 1/λ]}`; the quadrature
//! oracle [`s_quadrature`] decides between them.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::canonical::sinc_intervals;
use crate::grids::FieldSample;
use crate::group::GroupPoint;
use crate::numeric::{
    cis2pi, compensated_sum, indicator_hat, integrate_gl, moments, phase_sinc, TWO_PI,
};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Below this `|y|·(interval length)` the difference quotients lose digits
/// and the kernels are integrated by Gauss–Legendre instead.
const SMALL_Y: f64 = 1e-4;

/// Regularizer in the relative deviation `|closed − quad| / (|quad| + ε)`.
pub const SINC_EPS: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reading {
    AsPrinted,
    Corrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SincMethod {
    ClosedForm(Reading),
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SincValue {
    pub s0: Complex64,
    pub s1: Complex64,
    pub s: Complex64,
    pub method: SincMethod,
}

impl SincValue {
    fn new(s0: Complex64, s1: Complex64, method: SincMethod) -> Self {
        SincValue {
            s0,
            s1,
            s: s0 + s1,
            method,
        }
    }
}

fn m_fn(w: f64) -> Complex64 {
    phase_sinc(TWO_PI * w)
}

fn n_fn(w: f64) -> Complex64 {
    m_fn(-w)
}

fn i2pi(y: f64) -> Complex64 {
    Complex64::new(0.0, TWO_PI * y)
}

/// `J_x = [−1, 0] ∩ ([−1, 0] + x)`.
fn j_interval(x: f64) -> Option<(f64, f64)> {
    let (a, b) = ((-1.0f64).max(x - 1.0), 0.0f64.min(x));
    (a < b).then_some((a, b))
}

/// `F_{x,y}(λ) = −λ 1_{[−1,0]}(λ) 1̂_{J_x}(λy)`.
pub fn f_xy(lambda: f64, x: f64, y: f64) -> Complex64 {
    if !(-1.0..=0.0).contains(&lambda) {
        return ZERO;
    }
    match j_interval(x) {
        Some((a, b)) => indicator_hat(a, b, lambda * y) * -lambda,
        None => ZERO,
    }
}

/// `G_{x,y}(λ) = λ 1_{[0,1]}(λ) 1̂_{I_{x,λ}}(λy)`; at `λ = 0` the limit value.
pub fn g_xy(lambda: f64, x: f64, y: f64, reading: Reading) -> Complex64 {
    if !(0.0..=1.0).contains(&lambda) {
        return ZERO;
    }
    if lambda == 0.0 {
        // λ·|I_{x,λ}| → 0, or → 2 when I_{x,λ} has length 2/λ + 1 − |x|
        return match reading {
            Reading::Corrected => ZERO,
            Reading::AsPrinted => Complex64::new(2.0, 0.0),
        };
    }
    let iv = sinc_intervals(x, lambda, reading).expect("lambda in (0, 1]");
    match iv.i {
        Some((a, b)) => indicator_hat(a, b, lambda * y) * lambda,
        None => ZERO,
    }
}

/// `S₀` in closed form. Zero outside the strip `|x| < 1`.
///
/// Corrected: `−(M(z − y·b) − M(z − y·a))/(2πiy)` with `J_x = [a, b]`, i.e.
/// `−(M(z) − M(z + y(1−x)))/(2πiy)` for `0 ≤ x < 1` and
/// `−(M(z − xy) − M(z + y))/(2πiy)` for `−1 < x < 0`. The printed formula is
/// the same expression without the leading minus sign.
pub fn s0_closed(x: f64, y: f64, z: f64, reading: Reading) -> Complex64 {
    let Some((a, b)) = j_interval(x) else {
        return ZERO;
    };
    let corrected = if y.abs() * (b - a) < SMALL_Y {
        // ∫_J M₁(2π(z − yt)) dt with M₁(θ) = ∫₀¹ u e^{iθu} du
        integrate_gl(|t| moments(TWO_PI * (z - y * t))[1], a, b, 1, 8)
    } else {
        -(m_fn(z - y * b) - m_fn(z - y * a)) / i2pi(y)
    };
    match reading {
        Reading::Corrected => corrected,
        Reading::AsPrinted => -corrected,
    }
}

/// `S₁` in closed form. Zero outside the strip `|x| < 1`.
///
/// Corrected: `e^{2πiy}(N(A) − N(B))/(2πiy)` with `A = z − y·b`, `B = z − y·a`
/// for `J_x = [a, b]`. As printed:
/// `(e^{2πiy}N(A) − e^{−2πiy}N(B))/(2πiy)` with the same `A`, `B`.
pub fn s1_closed(x: f64, y: f64, z: f64, reading: Reading) -> Complex64 {
    let Some((a, b)) = j_interval(x) else {
        return ZERO;
    };
    let (big_a, big_b) = (z - y * b, z - y * a);
    let small = y.abs() * (b - a) < SMALL_Y;
    match reading {
        Reading::Corrected if small => {
            cis2pi(y) * integrate_gl(|tau| moments(TWO_PI * (y * tau - z))[1], a, b, 1, 8)
        }
        Reading::Corrected => cis2pi(y) * (n_fn(big_a) - n_fn(big_b)) / i2pi(y),
        Reading::AsPrinted if small => {
            let panels = 4 + (4.0 * (z.abs() + y.abs())).ceil() as usize;
            integrate_gl(
                |lam| g_xy(lam, x, y, reading) * cis2pi(-lam * z),
                0.0,
                1.0,
                panels,
                16,
            )
        }
        Reading::AsPrinted => (cis2pi(y) * n_fn(big_a) - cis2pi(-y) * n_fn(big_b)) / i2pi(y),
    }
}

/// Both components in closed form.
pub fn sinc_closed(x: f64, y: f64, z: f64, reading: Reading) -> SincValue {
    SincValue::new(
        s0_closed(x, y, z, reading),
        s1_closed(x, y, z, reading),
        SincMethod::ClosedForm(reading),
    )
}

/// Quadrature of `∫ ⟨e_λ, π_λ(x,y,z) e_λ⟩ |λ| dλ` over the grid of `field`,
/// split into `λ < 0` (`s0`) and `λ > 0` (`s1`). Each slice inner product is
/// evaluated in closed form.
pub fn s_quadrature(x: f64, y: f64, z: f64, field: &FieldSample) -> SincValue {
    let p = GroupPoint {
        x1: x,
        x2: y,
        x3: z,
    };
    let terms: Vec<(f64, Complex64)> = field
        .grid()
        .nodes()
        .par_iter()
        .zip(field.slices().par_iter())
        .map(|(n, e)| (n.lambda, e.inner(&e.represent(n.lambda, p)) * n.weight))
        .collect();
    let s0 = compensated_sum(terms.iter().filter(|(l, _)| *l < 0.0).map(|(_, v)| *v));
    let s1 = compensated_sum(terms.iter().filter(|(l, _)| *l > 0.0).map(|(_, v)| *v));
    SincValue::new(s0, s1, SincMethod::Quadrature)
}

/// `n` seeded points with `x ∈ (−1, 1)` and `y, z ∈ [−1, 1]`.
pub fn strip_points(n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let x = rng.gen_range(-1.0..1.0);
            let y = rng.gen_range(-1.0..=1.0);
            let z = rng.gen_range(-1.0..=1.0);
            (x, y, z)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SincRow {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub quadrature: SincValue,
    pub corrected: SincValue,
    pub printed: SincValue,
    pub dev_s0_corrected: f64,
    pub dev_s0_printed: f64,
    pub dev_s1_corrected: f64,
    pub dev_s1_printed: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SincReport {
    pub eps: f64,
    pub max_dev_s0_corrected: f64,
    pub max_dev_s0_printed: f64,
    pub max_dev_s1_corrected: f64,
    pub max_dev_s1_printed: f64,
    /// The reading whose `S₀` agrees better with quadrature, if any points.
    pub s0_reading: Option<Reading>,
    /// The reading whose `S₁` agrees better with quadrature, if any points.
    pub s1_reading: Option<Reading>,
    pub rows: Vec<SincRow>,
}

fn rel_dev(closed: Complex64, quad: Complex64) -> f64 {
    (closed - quad).norm() / (quad.norm() + SINC_EPS)
}

/// Closed forms (both readings) against quadrature on `field` at each point.
pub fn sinc_compare(points: &[(f64, f64, f64)], field: &FieldSample) -> SincReport {
    let rows: Vec<SincRow> = points
        .iter()
        .map(|&(x, y, z)| {
            let quadrature = s_quadrature(x, y, z, field);
            let corrected = sinc_closed(x, y, z, Reading::Corrected);
            let printed = sinc_closed(x, y, z, Reading::AsPrinted);
            SincRow {
                x,
                y,
                z,
                dev_s0_corrected: rel_dev(corrected.s0, quadrature.s0),
                dev_s0_printed: rel_dev(printed.s0, quadrature.s0),
                dev_s1_corrected: rel_dev(corrected.s1, quadrature.s1),
                dev_s1_printed: rel_dev(printed.s1, quadrature.s1),
                quadrature,
                corrected,
                printed,
            }
        })
        .collect();
    let max = |f: fn(&SincRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let max_dev_s0_corrected = max(|r| r.dev_s0_corrected);
    let max_dev_s0_printed = max(|r| r.dev_s0_printed);
    let max_dev_s1_corrected = max(|r| r.dev_s1_corrected);
    let max_dev_s1_printed = max(|r| r.dev_s1_printed);
    let pick = |c: f64, p: f64| {
        (!rows.is_empty()).then_some(if c <= p {
            Reading::Corrected
        } else {
            Reading::AsPrinted
        })
    };
    SincReport {
        eps: SINC_EPS,
        s0_reading: pick(max_dev_s0_corrected, max_dev_s0_printed),
        s1_reading: pick(max_dev_s1_corrected, max_dev_s1_printed),
        max_dev_s0_corrected,
        max_dev_s0_printed,
        max_dev_s1_corrected,
        max_dev_s1_printed,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_field;
    use crate::grids::{lambda_grid, SpectralSet};
    use std::f64::consts::PI;

    fn field(n: usize) -> FieldSample {
        let grid = lambda_grid(&SpectralSet::interval(-1.0, 1.0).unwrap(), n, 1e-12).unwrap();
        canonical_field(&grid).unwrap()
    }

    #[test]
    fn printed_value_at_half_one_one() {
        let want = -1.0 / (3.0 * PI * PI);
        assert!((s0_closed(0.5, 1.0, 1.0, Reading::AsPrinted) - want).norm() < 1e-12);
        assert!((s0_closed(0.5, 1.0, 1.0, Reading::Corrected) + want).norm() < 1e-12);
        assert_eq!(s0_closed(1.5, 0.3, 0.2, Reading::AsPrinted), ZERO);
    }

    #[test]
    fn f_and_g_examples() {
        assert_eq!(f_xy(0.5, 0.2, 0.3), ZERO);
        assert_eq!(f_xy(-0.5, 1.0, 0.3), ZERO);
        assert!((f_xy(-0.4, 0.25, 0.0) - Complex64::new(0.4 * 0.75, 0.0)).norm() < 1e-15);
        assert_eq!(g_xy(-0.5, 0.2, 0.3, Reading::Corrected), ZERO);
        let lam = 0.6;
        let want = lam * (2.0 / lam + 1.0);
        assert!(
            (g_xy(lam, 0.0, 0.0, Reading::AsPrinted) - Complex64::new(want, 0.0)).norm() < 1e-14
        );
        assert!(
            (g_xy(lam, 0.0, 0.0, Reading::Corrected) - Complex64::new(lam, 0.0)).norm() < 1e-15
        );
    }

    #[test]
    fn g_is_continuous_in_x() {
        for reading in [Reading::Corrected, Reading::AsPrinted] {
            for x0 in [0.0, 0.5, -0.5] {
                let l = g_xy(0.7, x0 - 1e-9, 0.8, reading);
                let r = g_xy(0.7, x0 + 1e-9, 0.8, reading);
                assert!((l - r).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn quadrature_basics() {
        let e = field(512);
        let v = s_quadrature(0.0, 0.0, 0.0, &e);
        assert!((v.s - Complex64::new(e.grid().total_weight(), 0.0)).norm() < 1e-14);
        assert!((v.s - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let out = s_quadrature(1.5, 0.2, 0.3, &e);
        assert_eq!(out.s, ZERO);
        let edge = s_quadrature(-1.0, 0.7, 0.1, &e);
        assert!(edge.s.norm() <= 1e-12);
    }

    #[test]
    fn closed_forms_agree_with_quadrature() {
        let e = field(2048);
        let mut pts = strip_points(12, 3);
        pts.extend([
            (0.5, 1.0, 1.0),
            (0.3, 0.0, 0.4),
            (-0.4, 1e-7, -0.2),
            (0.2, 0.5, 0.0),
            (-0.6, 0.25, -0.6 * 0.25),
        ]);
        let r = sinc_compare(&pts, &e);
        assert!(r.max_dev_s0_corrected < 1e-5, "{}", r.max_dev_s0_corrected);
        assert!(r.max_dev_s1_corrected < 1e-5, "{}", r.max_dev_s1_corrected);
        assert_eq!(r.s0_reading, Some(Reading::Corrected));
        assert_eq!(r.s1_reading, Some(Reading::Corrected));
        assert!(r.max_dev_s0_printed > 0.1);
        assert!(sinc_compare(&[], &e).rows.is_empty());
    }

    #[test]
    fn s0_is_the_inverse_transform_of_f() {
        let e = field(1024);
        for &(x, y, z) in &[(0.3, 0.7, -0.2), (-0.5, -1.0, 0.9)] {
            let quad: Complex64 = e
                .grid()
                .nodes()
                .iter()
                .filter(|n| n.lambda < 0.0)
                .map(|n| f_xy(n.lambda, x, y) * cis2pi(-n.lambda * z) * (n.hi - n.lo))
                .sum();
            let closed = s0_closed(x, y, z, Reading::Corrected);
            assert!((quad - closed).norm() < 1e-5, "{quad} vs {closed}");
        }
    }

    #[test]
    fn small_y_branch_is_continuous() {
        for reading in [Reading::Corrected, Reading::AsPrinted] {
            for &(x, z) in &[(0.3, 0.4), (-0.7, -0.9)] {
                let y0 = SMALL_Y / (1.0 - f64::abs(x));
                let below = sinc_closed(x, y0 * (1.0 - 1e-9), z, reading);
                let above = sinc_closed(x, y0 * (1.0 + 1e-9), z, reading);
                assert!(
                    (below.s0 - above.s0).norm() < 1e-9,
                    "{reading:?} {below:?} {above:?}"
                );
                assert!(
                    (below.s1 - above.s1).norm() < 1e-9,
                    "{reading:?} {below:?} {above:?}"
                );
            }
        }
    }

    #[test]
    fn conjugation_symmetry_of_s0() {
        for &(x, y, z) in &[(0.3, 0.7, -0.2), (-0.5, -1.0, 0.9), (0.1, 0.0, 0.3)] {
            let a = s0_closed(x, y, z, Reading::Corrected).conj();
            let b = s0_closed(x, -y, -z, Reading::Corrected);
            assert!((a - b).norm() < 1e-13);
        }
    }
}
