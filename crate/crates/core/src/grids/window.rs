use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::borrow::Cow;

use crate::error::{Error, Result};
use crate::group::GroupPoint;
use crate::numeric::{cis2pi, poly_exp_integral, TWO_PI};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// One analytic piece of a time-domain function:
/// `t ↦ (c0 + c1·(t − a)) · e^{2πi·freq·t}` on `[a, b)`, zero elsewhere.
///
/// Indicators, modulated indicators and linear interpolants of tabulated
/// samples are all of this form, and the class is closed under translation,
/// modulation, constant phases and dilation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    pub c0: Complex64,
    pub c1: Complex64,
    pub freq: f64,
}

impl Segment {
    pub fn constant(a: f64, b: f64, scale: Complex64) -> Self {
        Segment {
            a,
            b,
            c0: scale,
            c1: ZERO,
            freq: 0.0,
        }
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Complex64 {
        if self.a <= t && t < self.b {
            (self.c0 + self.c1 * (t - self.a)) * cis2pi(self.freq * t)
        } else {
            ZERO
        }
    }

    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn is_null(&self) -> bool {
        self.b <= self.a || (self.c0 == ZERO && self.c1 == ZERO)
    }

    /// `t ↦ phase · e^{2πi·df·t} · self(t − shift)`.
    pub fn transformed(&self, shift: f64, df: f64, phase: Complex64) -> Segment {
        let ph = phase * cis2pi(-self.freq * shift);
        Segment {
            a: self.a + shift,
            b: self.b + shift,
            c0: self.c0 * ph,
            c1: self.c1 * ph,
            freq: self.freq + df,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Segment {
        Segment {
            c0: self.c0 * c,
            c1: self.c1 * c,
            ..*self
        }
    }

    /// `s ↦ |r|⁻¹ · self(s / r)`, for `r ≠ 0`.
    pub fn dilated(&self, r: f64) -> Segment {
        let inv = 1.0 / r.abs();
        if r > 0.0 {
            Segment {
                a: r * self.a,
                b: r * self.b,
                c0: self.c0 * inv,
                c1: self.c1 * (inv / r),
                freq: self.freq / r,
            }
        } else {
            Segment {
                a: r * self.b,
                b: r * self.a,
                c0: (self.c0 + self.c1 * (self.b - self.a)) * inv,
                c1: self.c1 * (inv / r),
                freq: self.freq / r,
            }
        }
    }

    /// The piece restricted to `[lo, hi)`, if nonempty.
    pub fn restricted(&self, lo: f64, hi: f64) -> Option<Segment> {
        let (na, nb) = (self.a.max(lo), self.b.min(hi));
        if na >= nb {
            return None;
        }
        Some(Segment {
            a: na,
            b: nb,
            c0: self.c0 + self.c1 * (na - self.a),
            c1: self.c1,
            freq: self.freq,
        })
    }

    /// `∫ self · conj(other) dt` over the overlap of the two supports.
    pub fn inner(&self, other: &Segment) -> Complex64 {
        let lo = self.a.max(other.a);
        let hi = self.b.min(other.b);
        if lo >= hi {
            return ZERO;
        }
        let p0 = self.c0 + self.c1 * (lo - self.a);
        let p1 = self.c1;
        let q0 = (other.c0 + other.c1 * (lo - other.a)).conj();
        let q1 = other.c1.conj();
        let df = self.freq - other.freq;
        let coeffs = [p0 * q0, p0 * q1 + p1 * q0, p1 * q1];
        cis2pi(df * lo) * poly_exp_integral(coeffs, TWO_PI * df, hi - lo)
    }
}

/// Uniform time grid `offset + j·step`, `j = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub offset: f64,
    pub step: f64,
    pub count: usize,
}

impl TimeGrid {
    pub fn new(offset: f64, step: f64, count: usize) -> Result<Self> {
        if !(offset.is_finite() && step.is_finite() && step > 0.0 && count > 0) {
            return Err(Error::InvalidInput(format!(
                "time grid needs finite offset, step > 0 and count > 0 (got {offset}, {step}, {count})"
            )));
        }
        Ok(TimeGrid {
            offset,
            step,
            count,
        })
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        self.offset + j as f64 * self.step
    }

    pub fn end(&self) -> f64 {
        self.node(self.count - 1)
    }
}

/// A time-domain function on one λ-slice.
#[derive(Debug, Clone, PartialEq)]
pub enum Window {
    /// `scale · 1_{[a,b)}`.
    Indicator { a: f64, b: f64, scale: Complex64 },
    /// A finite sum of analytic pieces (modulated indicators and the like).
    Segments(Vec<Segment>),
    /// Samples on a uniform grid, linearly interpolated, zero off the grid.
    Tabulated {
        grid: TimeGrid,
        samples: Vec<Complex64>,
    },
}

impl Window {
    pub fn indicator(a: f64, b: f64, scale: Complex64) -> Result<Window> {
        if !(a.is_finite() && b.is_finite()) || a >= b {
            return Err(Error::InvalidInput(format!(
                "indicator needs a < b, got [{a}, {b}]"
            )));
        }
        Ok(Window::Indicator { a, b, scale })
    }

    pub fn tabulated(grid: TimeGrid, samples: Vec<Complex64>) -> Result<Window> {
        if samples.len() != grid.count {
            return Err(Error::Shape(format!(
                "{} samples for a grid of {} nodes",
                samples.len(),
                grid.count
            )));
        }
        Ok(Window::Tabulated { grid, samples })
    }

    pub fn zero() -> Window {
        Window::Segments(Vec::new())
    }

    pub fn is_analytic(&self) -> bool {
        !matches!(self, Window::Tabulated { .. })
    }

    /// The window as a list of analytic pieces.
    pub fn segments(&self) -> Cow<'_, [Segment]> {
        match self {
            Window::Indicator { a, b, scale } => {
                Cow::Owned(vec![Segment::constant(*a, *b, *scale)])
            }
            Window::Segments(s) => Cow::Borrowed(s),
            Window::Tabulated { grid, samples } => {
                let mut out = Vec::with_capacity(samples.len().saturating_sub(1));
                for j in 0..samples.len().saturating_sub(1) {
                    let (a, b) = (grid.node(j), grid.node(j + 1));
                    out.push(Segment {
                        a,
                        b,
                        c0: samples[j],
                        c1: (samples[j + 1] - samples[j]) / (b - a),
                        freq: 0.0,
                    });
                }
                Cow::Owned(out)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            Window::Indicator { a, b, scale } => {
                if *a <= t && t < *b {
                    *scale
                } else {
                    ZERO
                }
            }
            Window::Segments(s) => s.iter().map(|seg| seg.eval(t)).sum(),
            Window::Tabulated { grid, samples } => {
                let u = (t - grid.offset) / grid.step;
                if u < 0.0 || grid.count < 2 || u > (grid.count - 1) as f64 {
                    return ZERO;
                }
                let j = (u.floor() as usize).min(grid.count - 2);
                let frac = u - j as f64;
                samples[j] * (1.0 - frac) + samples[j + 1] * frac
            }
        }
    }

    /// Bounding interval of the pieces with nonzero coefficients.
    pub fn support(&self) -> Option<(f64, f64)> {
        match self {
            Window::Indicator { a, b, scale } => (*scale != ZERO).then_some((*a, *b)),
            Window::Tabulated { grid, samples } => {
                let first = samples.iter().position(|z| *z != ZERO)?;
                let last = samples.iter().rposition(|z| *z != ZERO)?;
                Some((
                    grid.node(first.saturating_sub(1)),
                    grid.node((last + 1).min(grid.count - 1)),
                ))
            }
            Window::Segments(s) => s
                .iter()
                .filter(|seg| !seg.is_null())
                .fold(None, |acc, seg| {
                    Some(match acc {
                        None => (seg.a, seg.b),
                        Some((lo, hi)) => (f64::min(lo, seg.a), f64::max(hi, seg.b)),
                    })
                }),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support().is_none()
    }

    /// `⟨self, other⟩ = ∫ self · conj(other)`.
    pub fn inner(&self, other: &Window) -> Complex64 {
        match (self, other) {
            (
                Window::Indicator { a, b, scale },
                Window::Indicator {
                    a: c,
                    b: d,
                    scale: s2,
                },
            ) => {
                let len = (b.min(*d) - a.max(*c)).max(0.0);
                scale * s2.conj() * len
            }
            _ => segments_inner(&self.segments(), &other.segments()),
        }
    }

    pub fn norm_sq(&self) -> f64 {
        match self {
            Window::Indicator { a, b, scale } => scale.norm_sqr() * (b - a),
            _ => self.inner(self).re,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Window {
        match self {
            Window::Indicator { a, b, scale } => Window::Indicator {
                a: *a,
                b: *b,
                scale: scale * c,
            },
            Window::Segments(s) => Window::Segments(s.iter().map(|seg| seg.scaled(c)).collect()),
            Window::Tabulated { grid, samples } => Window::Tabulated {
                grid: *grid,
                samples: samples.iter().map(|z| z * c).collect(),
            },
        }
    }

    /// `t ↦ phase · e^{2πi·df·t} · self(t − shift)`, computed exactly.
    ///
    /// Indicators stay indicators when `df = 0`; tabulated windows stay
    /// tabulated under pure shifts and phases, and become analytic pieces
    /// once modulated.
    pub fn transformed(&self, shift: f64, df: f64, phase: Complex64) -> Window {
        match self {
            Window::Indicator { a, b, scale } if df == 0.0 => Window::Indicator {
                a: a + shift,
                b: b + shift,
                scale: scale * phase,
            },
            Window::Tabulated { grid, samples } if df == 0.0 => Window::Tabulated {
                grid: TimeGrid {
                    offset: grid.offset + shift,
                    ..*grid
                },
                samples: samples.iter().map(|z| z * phase).collect(),
            },
            _ => Window::Segments(
                self.segments()
                    .iter()
                    .map(|seg| seg.transformed(shift, df, phase))
                    .collect(),
            ),
        }
    }

    /// The Schrödinger action `π_λ(x)` on this window.
    pub fn represent(&self, lambda: f64, x: GroupPoint) -> Window {
        self.transformed(x.x1, -lambda * x.x2, cis2pi(lambda * x.x3))
    }

    /// `s ↦ |r|⁻¹ · self(s / r)` as analytic pieces.
    pub fn dilated(&self, r: f64) -> Vec<Segment> {
        self.segments().iter().map(|s| s.dilated(r)).collect()
    }

    pub fn add(&self, other: &Window) -> Window {
        let mut segs = self.segments().into_owned();
        segs.extend(other.segments().iter().copied());
        Window::Segments(segs)
    }
}

/// `Σ_{p,q} ∫ p · conj(q)` over all overlapping pairs.
pub fn segments_inner(f: &[Segment], g: &[Segment]) -> Complex64 {
    if f.len() * g.len() > 4096 {
        return sorted_inner(f, g);
    }
    let mut acc = ZERO;
    for p in f {
        for q in g {
            if p.a < q.b && q.a < p.b {
                acc += p.inner(q);
            }
        }
    }
    acc
}

/// Sweep over `g` sorted by left endpoint, so only candidates that can
/// overlap each piece of `f` are visited.
fn sorted_inner(f: &[Segment], g: &[Segment]) -> Complex64 {
    let mut sorted: Vec<&Segment> = g.iter().filter(|q| !q.is_null()).collect();
    sorted.sort_by(|x, y| x.a.total_cmp(&y.a));
    let longest = sorted.iter().map(|q| q.len()).fold(0.0, f64::max);
    let mut acc = ZERO;
    for p in f.iter().filter(|p| !p.is_null()) {
        let start = sorted.partition_point(|q| q.a < p.a - longest);
        for q in &sorted[start..] {
            if q.a >= p.b {
                break;
            }
            if p.a < q.b {
                acc += p.inner(q);
            }
        }
    }
    acc
}

/// Folds pieces into `[0, 1)` by integer translation: the 1-periodization.
pub fn periodize_unit(segs: &[Segment]) -> Vec<Segment> {
    let mut out = Vec::new();
    for s in segs {
        if s.is_null() {
            continue;
        }
        let first = s.a.floor() as i64;
        let last = s.b.ceil() as i64;
        for n in first..last {
            let nf = n as f64;
            if let Some(piece) = s.restricted(nf, nf + 1.0) {
                out.push(piece.transformed(-nf, 0.0, Complex64::new(1.0, 0.0)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_inner(f: &Window, g: &Window, lo: f64, hi: f64) -> Complex64 {
        let n = 200_000;
        let h = (hi - lo) / n as f64;
        (0..n)
            .map(|i| {
                let t = lo + (i as f64 + 0.5) * h;
                f.eval(t) * g.eval(t).conj()
            })
            .sum::<Complex64>()
            * h
    }

    fn tab() -> Window {
        let grid = TimeGrid::new(-0.3, 0.25, 7).unwrap();
        let samples = (0..7)
            .map(|j| Complex64::new((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
            .collect();
        Window::tabulated(grid, samples).unwrap()
    }

    #[test]
    fn indicator_norm_is_exact() {
        let w = Window::indicator(1.0, 2.0, Complex64::new(0.0, 2.0)).unwrap();
        assert_eq!(w.norm_sq(), 4.0);
        assert!(Window::indicator(2.0, 1.0, Complex64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn closed_form_inner_products_match_midpoint_sums() {
        let a = Window::indicator(0.0, 1.0, Complex64::new(1.0, 0.5))
            .unwrap()
            .transformed(0.2, -0.75, Complex64::new(0.0, 1.0));
        let b = tab();
        let c = tab().transformed(-0.1, 2.3, Complex64::new(0.6, 0.8));
        for (f, g) in [(&a, &b), (&b, &c), (&a, &c), (&c, &c)] {
            let exact = f.inner(g);
            let brute = brute_inner(f, g, -2.0, 3.0);
            assert!((exact - brute).norm() < 1e-6, "{exact} vs {brute}");
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let a = tab().transformed(0.05, 1.1, Complex64::new(1.0, 0.0));
        let b = Window::indicator(-0.2, 0.6, Complex64::new(2.0, -1.0)).unwrap();
        assert!((a.inner(&b) - b.inner(&a).conj()).norm() < 1e-15);
    }

    #[test]
    fn transforms_preserve_norm() {
        let w = tab();
        let n0 = w.norm_sq();
        for (shift, df) in [(0.0, 0.0), (3.3, 0.0), (-1.0, 4.5), (10.0, -0.01)] {
            let t = w.transformed(shift, df, Complex64::from_polar(1.0, 0.3));
            assert!(((t.norm_sq() - n0) / n0).abs() < 1e-12);
        }
    }

    #[test]
    fn dilation_and_periodization_preserve_norm() {
        let w = tab().transformed(0.0, 0.4, Complex64::new(1.0, 0.0));
        for r in [0.5, -0.3, 2.0] {
            let d = w.dilated(r);
            // ‖|r|⁻¹ f(·/r)‖² = |r|⁻¹ ‖f‖²
            let nd = segments_inner(&d, &d).re;
            assert!((nd - w.norm_sq() / r.abs()).abs() < 1e-12 * nd.max(1.0));
            for s in [0.0, 0.37, -1.2] {
                let direct = Window::Segments(d.clone()).eval(s);
                assert!((direct - w.eval(s / r) / r.abs()).norm() < 1e-12);
            }
        }
        let p = periodize_unit(&w.segments());
        assert!(p.iter().all(|s| s.a >= 0.0 && s.b <= 1.0));
        let total: f64 = p.iter().map(|s| s.inner(s).re).sum();
        let direct: f64 = w.segments().iter().map(|s| s.inner(s).re).sum();
        assert!((total - direct).abs() < 1e-12);
    }

    #[test]
    fn sorted_sweep_matches_pairwise_sum() {
        let base = tab().transformed(0.0, 0.7, Complex64::new(1.0, 0.0));
        let mut f = Vec::new();
        let mut g = Vec::new();
        for j in 0..80 {
            let shift = 0.37 * j as f64;
            f.extend(
                base.transformed(shift, 0.1 * j as f64, Complex64::new(1.0, 0.0))
                    .segments()
                    .iter()
                    .copied(),
            );
            g.extend(
                base.transformed(shift * 0.9, -0.05 * j as f64, Complex64::new(0.0, 1.0))
                    .segments()
                    .iter()
                    .copied(),
            );
        }
        let mut naive = ZERO;
        for p in &f {
            for q in &g {
                naive += p.inner(q);
            }
        }
        let fast = segments_inner(&f, &g);
        assert!((fast - naive).norm() < 1e-10 * naive.norm().max(1.0));
    }

    #[test]
    fn tabulated_eval_interpolates() {
        let w = tab();
        if let Window::Tabulated { grid, samples } = &w {
            assert_eq!(w.eval(grid.node(3)), samples[3]);
            let mid = 0.5 * (grid.node(1) + grid.node(2));
            assert!((w.eval(mid) - 0.5 * (samples[1] + samples[2])).norm() < 1e-15);
            assert_eq!(w.eval(grid.offset - 1e-9), ZERO);
        }
    }
}
