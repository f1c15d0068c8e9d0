//! Per-λ Gabor systems `G(u, α, β, λ) = { e^{-2πiλβl t} u(t − αk) }`.
//!
//! For a window supported in an interval of length at most `1/(β|λ|)` the
//! frame operator of `G(u, α, β, λ)` is multiplication by the periodization
//! `(β|λ|)⁻¹ Σ_k |u(t − αk)|²`, so the system is a Parseval frame exactly
//! when that periodization is identically one. [`painless_residual`] measures
//! the distance to one; [`frame_bounds_empirical`] estimates frame bounds from
//! truncated coefficient sums as an independent check.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{segments_inner, Segment, TimeGrid, Window};
use crate::group::QuasiLatticeSpec;
use crate::numeric::cis2pi;

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Tolerance for the exact norm identity `‖|λ|^{1/2}u‖² = αβ|λ|`.
pub const NORM_TOL: f64 = 1e-12;

/// The atom `t ↦ e^{-2πiλβl t} u(t − αk)`.
pub fn gabor_atom(u: &Window, lambda: f64, k: i64, l: i64, spec: QuasiLatticeSpec) -> Window {
    u.transformed(
        spec.alpha * k as f64,
        -lambda * spec.beta * l as f64,
        Complex64::new(1.0, 0.0),
    )
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "lambda must be finite and nonzero, got {lambda}"
        )));
    }
    Ok(())
}

/// `sup_t |(β|λ|)⁻¹ Σ_k |u(t − αk)|² − 1|`, evaluated exactly on the
/// partition of `[0, α)` cut out by the window's breakpoints.
///
/// Returns [`Error::NotApplicable`] when the support of `u` is longer than
/// `1/(β|λ|)`.
pub fn painless_residual(u: &Window, spec: QuasiLatticeSpec, lambda: f64) -> Result<f64> {
    check_lambda(lambda)?;
    let density = spec.beta * lambda.abs();
    let Some((s0, s1)) = u.support() else {
        return Ok(1.0);
    };
    let max_len = 1.0 / density;
    if s1 - s0 > max_len * (1.0 + 1e-12) {
        return Err(Error::NotApplicable(format!(
            "support length {} exceeds 1/(beta|lambda|) = {max_len}",
            s1 - s0
        )));
    }
    let alpha = spec.alpha;
    let segs: Vec<Segment> = u
        .segments()
        .iter()
        .filter(|s| !s.is_null())
        .copied()
        .collect();

    let tol = 1e-12 * alpha.max(1.0);
    let mut cuts = vec![0.0];
    for s in &segs {
        for x in [s.a, s.b] {
            let mut r = x - alpha * (x / alpha).floor();
            if r >= alpha - tol {
                r = 0.0;
            }
            cuts.push(r);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|b, a| (*b - *a).abs() <= tol);
    cuts.push(alpha);

    let mut worst: f64 = 0.0;
    for w in cuts.windows(2) {
        let (p, q) = (w[0], w[1]);
        if q - p <= tol {
            continue;
        }
        let mid = 0.5 * (p + q);
        worst = worst.max(cell_residual(&segs, alpha, density, p, q, mid));
    }
    Ok(worst)
}

/// Supremum of `|P − 1|` on one cell `[p, q)`.
fn cell_residual(segs: &[Segment], alpha: f64, density: f64, p: f64, q: f64, mid: f64) -> f64 {
    // Copies u(· − αk) that are active on the cell, as (k, pieces).
    let mut copies: Vec<(i64, Vec<&Segment>)> = Vec::new();
    for s in segs {
        let k_lo = ((mid - s.b) / alpha).floor() as i64;
        let k_hi = ((mid - s.a) / alpha).ceil() as i64;
        for k in k_lo..=k_hi {
            let shift = alpha * k as f64;
            if s.a + shift <= mid && mid < s.b + shift {
                match copies.iter_mut().find(|(kk, _)| *kk == k) {
                    Some((_, v)) => v.push(s),
                    None => copies.push((k, vec![s])),
                }
            }
        }
    }

    // Quadratic coefficients of Σ_k |u(t − αk)|² in τ = t − p, when every
    // copy is a single-frequency linear function on the cell.
    let mut quad = [0.0f64; 3];
    let mut exact = true;
    for (k, pieces) in &copies {
        let shift = alpha * *k as f64;
        let freq = pieces[0].freq;
        if pieces.iter().any(|s| s.freq != freq) {
            exact = false;
            break;
        }
        let mut c = Complex64::new(0.0, 0.0);
        let mut slope = Complex64::new(0.0, 0.0);
        for s in pieces {
            c += s.c0 + s.c1 * (p - shift - s.a);
            slope += s.c1;
        }
        quad[0] += c.norm_sqr();
        quad[1] += 2.0 * (c * slope.conj()).re;
        quad[2] += slope.norm_sqr();
    }

    let residual_at = |val: f64| (val / density - 1.0).abs();
    if exact {
        let eval = |tau: f64| quad[0] + quad[1] * tau + quad[2] * tau * tau;
        let len = q - p;
        let mut worst = residual_at(eval(0.0)).max(residual_at(eval(len)));
        if quad[2] > 0.0 {
            let v = -quad[1] / (2.0 * quad[2]);
            if v > 0.0 && v < len {
                worst = worst.max(residual_at(eval(v)));
            }
        }
        worst
    } else {
        // Overlapping pieces with different frequencies: sample the cell.
        let n = 256;
        (0..=n)
            .map(|i| {
                let t = p + (q - p) * i as f64 / n as f64;
                let total: f64 = copies
                    .iter()
                    .map(|(k, pieces)| {
                        let shift = alpha * *k as f64;
                        pieces
                            .iter()
                            .map(|s| {
                                (s.c0 + s.c1 * (t - shift - s.a)) * cis2pi(s.freq * (t - shift))
                            })
                            .sum::<Complex64>()
                            .norm_sqr()
                    })
                    .sum();
                residual_at(total)
            })
            .fold(0.0, f64::max)
    }
}

/// Seeded piecewise-linear test function on `[s0, s1]`, vanishing at both ends.
pub(crate) fn random_piecewise_linear(
    rng: &mut ChaCha8Rng,
    s0: f64,
    s1: f64,
    knots: usize,
) -> Window {
    let count = knots + 2;
    let grid = TimeGrid {
        offset: s0,
        step: (s1 - s0) / (count - 1) as f64,
        count,
    };
    let mut samples = vec![Complex64::new(0.0, 0.0); count];
    for z in samples.iter_mut().take(count - 1).skip(1) {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    Window::Tabulated { grid, samples }
}

/// Empirical frame bounds `(A, B)`: min and max over seeded random test
/// functions `f` of `Σ_{|k|≤kmax, |l|≤lmax} |⟨f, atom_{k,l}⟩|² / ‖f‖²`.
///
/// Test functions are piecewise linear on the window's support and vanish at
/// its ends. A zero window gives `(0, 0)`.
pub fn frame_bounds_empirical(
    u: &Window,
    spec: QuasiLatticeSpec,
    lambda: f64,
    trials: usize,
    kmax: i64,
    lmax: i64,
    seed: u64,
) -> Result<(f64, f64)> {
    check_lambda(lambda)?;
    if trials == 0 {
        return Err(Error::InvalidInput(
            "frame bound estimate needs at least one trial".into(),
        ));
    }
    let Some((s0, s1)) = u.support() else {
        return Ok((0.0, 0.0));
    };
    let ratios: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
            let f = loop {
                let f = random_piecewise_linear(&mut rng, s0, s1, 8);
                if f.norm_sq() > 0.0 {
                    break f;
                }
            };
            let fs = f.segments();
            let norm = f.norm_sq();
            let mut acc = 0.0;
            for k in -kmax..=kmax {
                for l in -lmax..=lmax {
                    let atom = gabor_atom(u, lambda, k, l, spec);
                    acc += segments_inner(&fs, &atom.segments()).norm_sqr();
                }
            }
            acc / norm
        })
        .collect();
    let lo = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormConditionReport {
    pub lambda: f64,
    /// `‖|λ|^{1/2} u‖²`.
    pub scaled_norm_sq: f64,
    /// `αβ|λ|`.
    pub target: f64,
    pub difference: f64,
    pub density_ok: bool,
    pub pass: bool,
}

/// Checks the necessary condition `‖|λ|^{1/2}u‖² = αβ|λ| ≤ 1` for
/// `G(|λ|^{1/2}u, α, β, λ)` to be a Parseval frame.
pub fn norm_condition_check(
    u: &Window,
    spec: QuasiLatticeSpec,
    lambda: f64,
) -> Result<NormConditionReport> {
    check_lambda(lambda)?;
    let scaled_norm_sq = lambda.abs() * u.norm_sq();
    let target = spec.covolume() * lambda.abs();
    let difference = scaled_norm_sq - target;
    let density_ok = target <= 1.0 + NORM_TOL;
    Ok(NormConditionReport {
        lambda,
        scaled_norm_sq,
        target,
        difference,
        density_ok,
        pass: density_ok && difference.abs() <= NORM_TOL * target.max(1.0),
    })
}
