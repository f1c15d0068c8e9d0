//! Field-level verification on `L²(E×ℝ)`.
//!
//! The translate of a field by a lattice point `(αk, βl, m)` is
//!
//! ```text
//! (T̂_{k,l,m} g)(λ, t) = e^{2πiλm} e^{-2πiλβl t} g(λ, t − αk).
//! ```
//!
//! This module checks whether `{T̂_γ g}` is a Parseval frame, evaluates the
//! orthogonality condition that glues the slices at `λ` and `λ − 1`, and
//! computes the periodization `Θ_k` whose identity `Θ_k = δ_k` characterizes
//! orthonormality of the translates.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::gabor::{
    frame_bounds_empirical, norm_condition_check, painless_residual, NormConditionReport,
    DEFAULT_SEED,
};
use crate::grids::{
    check_same_grid, field_inner, periodize_unit, segments_inner, FieldSample, Segment,
    SpectralSet, VectorField, Window,
};
use crate::group::{GroupPoint, LatticeBounds, LatticeIndex, QuasiLatticeSpec};
use crate::numeric::{cis2pi, compensated_sum};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };
const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Default tolerance on the per-slice painless residual.
pub const GABOR_TOL: f64 = 1e-12;
/// Tolerance on `max(|A − 1|, |B − 1|)` when empirical frame bounds stand in
/// for the painless criterion.
pub const EMPIRICAL_TOL: f64 = 2e-2;

/// `T̂_{k,l,m} g`, slice by slice.
pub fn translate_field(g: &FieldSample, idx: LatticeIndex, spec: QuasiLatticeSpec) -> FieldSample {
    translate_by_point(g, spec.realize(idx))
}

/// The continuous-parameter translate `λ ↦ π_λ(x) g(λ, ·)`.
pub fn translate_by_point(g: &FieldSample, x: GroupPoint) -> FieldSample {
    g.map_slices(|lam, w| w.represent(lam, x))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ResidualMethod {
    Painless,
    Empirical,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceVerdict {
    pub lambda: f64,
    pub method: ResidualMethod,
    pub residual: f64,
    pub frame_bounds: Option<(f64, f64)>,
    pub norm: NormConditionReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GaborFieldReport {
    pub tol: f64,
    pub worst_residual: f64,
    pub failures: usize,
    pub non_integer_lattice: bool,
    pub pass: bool,
    pub slices: Vec<SliceVerdict>,
}

/// [`gabor_field_verdict_with`] at [`GABOR_TOL`].
pub fn gabor_field_verdict(g: &FieldSample, spec: QuasiLatticeSpec) -> Result<GaborFieldReport> {
    gabor_field_verdict_with(g, spec, GABOR_TOL)
}

/// Checks at every node that `G(|λ|^{1/2} g(λ,·), α, β, λ)` is a Parseval
/// frame and that the norm condition `‖|λ|^{1/2}g(λ,·)‖² = αβ|λ| ≤ 1` holds.
///
/// Slices too long for the painless criterion fall back to empirical frame
/// bounds, judged against [`EMPIRICAL_TOL`].
pub fn gabor_field_verdict_with(
    g: &FieldSample,
    spec: QuasiLatticeSpec,
    tol: f64,
) -> Result<GaborFieldReport> {
    let slices: Vec<SliceVerdict> = g
        .grid()
        .nodes()
        .par_iter()
        .zip(g.slices().par_iter())
        .map(|(node, slice)| {
            let lambda = node.lambda;
            let u = slice.scaled(lambda.abs().sqrt().into());
            let norm = norm_condition_check(slice, spec, lambda)?;
            let (method, residual, frame_bounds, ok) = match painless_residual(&u, spec, lambda) {
                Ok(r) => (ResidualMethod::Painless, r, None, r <= tol),
                Err(Error::NotApplicable(_)) => {
                    let (a, b) = frame_bounds_empirical(&u, spec, lambda, 4, 8, 64, DEFAULT_SEED)?;
                    let r = (a - 1.0).abs().max((b - 1.0).abs());
                    (
                        ResidualMethod::Empirical,
                        r,
                        Some((a, b)),
                        r <= EMPIRICAL_TOL,
                    )
                }
                Err(e) => return Err(e),
            };
            Ok(SliceVerdict {
                lambda,
                method,
                residual,
                frame_bounds,
                norm,
                pass: ok && norm.pass,
            })
        })
        .collect::<Result<_>>()?;
    let worst_residual = slices.iter().map(|s| s.residual).fold(0.0, f64::max);
    let failures = slices.iter().filter(|s| !s.pass).count();
    Ok(GaborFieldReport {
        tol,
        worst_residual,
        failures,
        non_integer_lattice: spec.is_non_integer(),
        pass: failures == 0 && !slices.is_empty(),
        slices,
    })
}

struct SliceCache {
    segs: Vec<Segment>,
    support: Option<(f64, f64)>,
}

impl SliceCache {
    fn new(w: &Window) -> Self {
        SliceCache {
            segs: w.segments().into_owned(),
            support: w.support(),
        }
    }
}

/// The coefficients `⟨T̂_γ g, f⟩` for every `γ` in `bounds`, in
/// lexicographic `(k, l, m)` order.
///
/// Per `(k, l)` the slice products `w_i ⟨atom_{k,l}(λ_i), f(λ_i)⟩` are
/// computed once and reused for every `m`.
pub fn coefficient_sequence(
    g: &FieldSample,
    f: &FieldSample,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
) -> Result<Vec<Complex64>> {
    check_same_grid(g.grid(), f.grid())?;
    let nodes = g.grid().nodes();
    let gs: Vec<SliceCache> = g.slices().iter().map(SliceCache::new).collect();
    let fs: Vec<SliceCache> = f.slices().iter().map(SliceCache::new).collect();
    let phases: Vec<Vec<Complex64>> = (-bounds.m..=bounds.m)
        .map(|m| nodes.iter().map(|n| cis2pi(n.lambda * m as f64)).collect())
        .collect();
    let pairs: Vec<(i64, i64)> = (-bounds.k..=bounds.k)
        .flat_map(|k| (-bounds.l..=bounds.l).map(move |l| (k, l)))
        .collect();

    let blocks: Vec<Vec<Complex64>> = pairs
        .par_iter()
        .map(|&(k, l)| {
            let shift = spec.alpha * k as f64;
            let a: Vec<Complex64> = nodes
                .iter()
                .zip(gs.iter().zip(&fs))
                .map(|(n, (gc, fc))| match (gc.support, fc.support) {
                    (Some((g0, g1)), Some((f0, f1))) if g0 + shift < f1 && f0 < g1 + shift => {
                        let df = -n.lambda * spec.beta * l as f64;
                        let atom: Vec<Segment> = gc
                            .segs
                            .iter()
                            .map(|s| s.transformed(shift, df, ONE))
                            .collect();
                        segments_inner(&atom, &fc.segs) * n.weight
                    }
                    _ => ZERO,
                })
                .collect();
            phases
                .iter()
                .map(|ph| compensated_sum(a.iter().zip(ph).map(|(x, p)| x * p)))
                .collect()
        })
        .collect();
    Ok(blocks.concat())
}

/// Worst relative Parseval defect
/// `| Σ_{γ ∈ bounds} |⟨T̂_γ g, f⟩|² − ‖f‖² | / ‖f‖²` over the test fields.
pub fn parseval_residual(
    g: &FieldSample,
    spec: QuasiLatticeSpec,
    tests: &[FieldSample],
    bounds: LatticeBounds,
) -> Result<f64> {
    if tests.is_empty() {
        return Err(Error::InvalidInput(
            "parseval residual needs at least one test field".into(),
        ));
    }
    let mut worst: f64 = 0.0;
    for f in tests {
        let norm = f.norm_sq();
        if norm <= 0.0 {
            return Err(Error::InvalidInput("test field has zero norm".into()));
        }
        let total: f64 = coefficient_sequence(g, f, spec, bounds)?
            .iter()
            .map(|c| c.norm_sqr())
            .sum();
        worst = worst.max((total - norm).abs() / norm);
    }
    Ok(worst)
}

/// How the sum over the modulation index `l` is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ModulationSum {
    /// All `l ∈ ℤ`, in closed form through the periodization identity
    /// `Σ_l ⟨f₁, M_{r₁l}u₁⟩ conj⟨f₂, M_{r₂l}u₂⟩ = ∫₀¹ Per[P̃₁] conj(Per[P̃₂])`
    /// with `P̃ᵢ(s) = |rᵢ|⁻¹ (fᵢ conj uᵢ)(s/rᵢ)`.
    Exact,
    /// `|l| ≤ lmax`, term by term.
    Truncated(i64),
}

/// `f · conj(u)` as analytic pieces; needs one factor piecewise constant on
/// every overlap so the product stays linear.
fn product_conj(f: &[Segment], u: &[Segment]) -> Result<Vec<Segment>> {
    let mut out = Vec::new();
    for p in f {
        for q in u {
            let (lo, hi) = (p.a.max(q.a), p.b.min(q.b));
            if lo >= hi || p.is_null() || q.is_null() {
                continue;
            }
            let p = p.restricted(lo, hi).expect("nonempty overlap");
            let q = q.restricted(lo, hi).expect("nonempty overlap");
            if p.c1 != ZERO && q.c1 != ZERO {
                return Err(Error::InvalidInput(
                    "exact modulation sums need one factor to be piecewise constant".into(),
                ));
            }
            out.push(Segment {
                a: lo,
                b: hi,
                c0: p.c0 * q.c0.conj(),
                c1: p.c1 * q.c0.conj() + p.c0 * q.c1.conj(),
                freq: p.freq - q.freq,
            });
        }
    }
    Ok(out)
}

/// `Σ_l ⟨f₁, e^{-2πi r₁ l t} u₁⟩ · conj⟨f₂, e^{-2πi r₂ l t} u₂⟩`.
fn modulation_pair_sum(
    (f1, u1, r1): (&Window, &Window, f64),
    (f2, u2, r2): (&Window, &Window, f64),
    sum: ModulationSum,
) -> Result<Complex64> {
    match sum {
        ModulationSum::Exact => {
            let fold = |f: &Window, u: &Window, r: f64| -> Result<Vec<Segment>> {
                let p = product_conj(&f.segments(), &u.segments())?;
                let dilated: Vec<Segment> = p.iter().map(|s| s.dilated(r)).collect();
                Ok(periodize_unit(&dilated))
            };
            Ok(segments_inner(&fold(f1, u1, r1)?, &fold(f2, u2, r2)?))
        }
        ModulationSum::Truncated(lmax) => {
            let mut acc = Vec::with_capacity(2 * lmax as usize + 1);
            for l in -lmax..=lmax {
                let a = f1.inner(&u1.transformed(0.0, -r1 * l as f64, ONE));
                let b = f2.inner(&u2.transformed(0.0, -r2 * l as f64, ONE));
                acc.push(a * b.conj());
            }
            Ok(compensated_sum(acc))
        }
    }
}

/// The orthogonality sum
/// `Σ_{|k|≤kmax} Σ_l ⟨f(λ−1,·), e_{k,l}(λ−1,·)⟩ · conj⟨f(λ,·), e_{k,l}(λ,·)⟩`
/// with `e_{k,l}(μ, t) = e^{-2πiμβl t} g(μ, t − αk)`, for `λ ∈ (0, 1]`.
pub fn orthogonality_residual<G, F>(
    g: &G,
    f: &F,
    spec: QuasiLatticeSpec,
    lambda: f64,
    kmax: i64,
    sum: ModulationSum,
) -> Result<Complex64>
where
    G: VectorField + ?Sized,
    F: VectorField + ?Sized,
{
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "orthogonality condition needs lambda in (0, 1], got {lambda}"
        )));
    }
    let prev = lambda - 1.0;
    if prev == 0.0 {
        return Err(Error::Singularity { lambda });
    }
    let (g_prev, f_prev) = (g.slice_at(prev)?, f.slice_at(prev)?);
    let (g_cur, f_cur) = (g.slice_at(lambda)?, f.slice_at(lambda)?);
    let mut terms = Vec::new();
    for k in -kmax..=kmax {
        let shift = spec.alpha * k as f64;
        let u_prev = g_prev.transformed(shift, 0.0, ONE);
        let u_cur = g_cur.transformed(shift, 0.0, ONE);
        terms.push(modulation_pair_sum(
            (&f_prev, &u_prev, prev * spec.beta),
            (&f_cur, &u_cur, lambda * spec.beta),
            sum,
        )?);
    }
    Ok(compensated_sum(terms))
}

/// How the lattice sum in [`coefficient_cross_orthogonality`] is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossSum {
    /// Coefficient sequences truncated to `bounds`.
    Truncated(LatticeBounds),
    /// All `m` through Poisson summation over the λ-grid (pairs of nodes an
    /// integer apart, weight `wᵢwᵢ'/hᵢ`), all `l` in closed form, `|k| ≤ kmax`.
    Periodic { kmax: i64 },
}

/// `max |⟨C_j f, C_{j'} f'⟩_{ℓ²}| / (‖f‖‖f'‖)` over pairs of test fields, where
/// `C_j f = {⟨T̂_γ (g·1_{E_j}), f⟩}_γ`.
pub fn coefficient_cross_orthogonality(
    g: &FieldSample,
    ej: &SpectralSet,
    ej2: &SpectralSet,
    tests: &[FieldSample],
    spec: QuasiLatticeSpec,
    sum: CrossSum,
) -> Result<f64> {
    if ej.overlaps(ej2) {
        return Err(Error::Overlap);
    }
    for piece in [ej, ej2] {
        if let Some((lo, hi)) = piece.hull() {
            if hi - lo > 1.0 {
                return Err(Error::InvalidInput(format!(
                    "spectral piece [{lo}, {hi}] is not congruent to a subset of [0, 1]"
                )));
            }
        }
    }
    if tests.is_empty() {
        return Err(Error::InvalidInput(
            "cross orthogonality needs at least one test field".into(),
        ));
    }
    if ej.is_empty() || ej2.is_empty() {
        return Ok(0.0);
    }
    let norms: Vec<f64> = tests.iter().map(|f| f.norm_sq().sqrt()).collect();
    let mut worst: f64 = 0.0;
    match sum {
        CrossSum::Truncated(bounds) => {
            let (gj, gj2) = (g.restricted(ej), g.restricted(ej2));
            let cj: Vec<Vec<Complex64>> = tests
                .iter()
                .map(|f| coefficient_sequence(&gj, f, spec, bounds))
                .collect::<Result<_>>()?;
            let cj2: Vec<Vec<Complex64>> = tests
                .iter()
                .map(|f| coefficient_sequence(&gj2, f, spec, bounds))
                .collect::<Result<_>>()?;
            for (a, na) in cj.iter().zip(&norms) {
                for (b, nb) in cj2.iter().zip(&norms) {
                    let v = compensated_sum(a.iter().zip(b).map(|(x, y)| x * y.conj()));
                    worst = worst.max(v.norm() / (na * nb));
                }
            }
        }
        CrossSum::Periodic { kmax } => {
            let grid = g.grid();
            let nodes = grid.nodes();
            let mut pairs = Vec::new();
            for (i, n) in nodes.iter().enumerate() {
                if !ej.contains(n.lambda) {
                    continue;
                }
                let (lo, hi) = ej2.hull().expect("nonempty");
                for shift in (n.lambda - hi).ceil() as i64..=(n.lambda - lo).floor() as i64 {
                    if let Some(j) = grid.node_index(n.lambda - shift as f64) {
                        if ej2.contains(nodes[j].lambda) {
                            pairs.push((i, j));
                        }
                    }
                }
            }
            for (f, nf) in tests.iter().zip(&norms) {
                for (f2, nf2) in tests.iter().zip(&norms) {
                    let terms = pairs
                        .par_iter()
                        .map(|&(i, j)| {
                            let (ni, nj) = (&nodes[i], &nodes[j]);
                            let mut acc = ZERO;
                            for k in -kmax..=kmax {
                                let shift = spec.alpha * k as f64;
                                let ui = g.slice(i).transformed(shift, 0.0, ONE);
                                let uj = g.slice(j).transformed(shift, 0.0, ONE);
                                acc += modulation_pair_sum(
                                    (f.slice(i), &ui, ni.lambda * spec.beta),
                                    (f2.slice(j), &uj, nj.lambda * spec.beta),
                                    ModulationSum::Exact,
                                )?
                                .conj();
                            }
                            Ok(acc * (ni.weight * nj.weight / (ni.hi - ni.lo)))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    worst = worst.max(compensated_sum(terms).norm() / (nf * nf2));
                }
            }
        }
    }
    Ok(worst)
}

/// `⟨T̂_γ g, g⟩`.
pub fn gram_entry(g: &FieldSample, idx: LatticeIndex, spec: QuasiLatticeSpec) -> Result<Complex64> {
    field_inner(&translate_field(g, idx, spec), g)
}

/// `Θ_k(λ, t) = Σ_{l' ∈ β⁻¹ℤ, l'' ∈ ℤ} g(λ−l'', (t−l')/(λ−l'') − αk) · conj g(λ−l'', (t−l')/(λ−l''))`.
///
/// The sum is evaluated exactly: only `l''` with `λ − l''` in the spectral
/// set contribute, and for each of those only the finitely many `l'` that
/// put `(t − l')/(λ − l'')` inside the slice support.
pub fn theta<G: VectorField + ?Sized>(
    g: &G,
    spec: QuasiLatticeSpec,
    k: i64,
    lambda: f64,
    t: f64,
) -> Result<Complex64> {
    let set = g.spectral_set();
    let Some((lo, hi)) = set.hull() else {
        return Ok(ZERO);
    };
    let shift = spec.alpha * k as f64;
    let mut terms = Vec::new();
    for j in (lambda - hi).ceil() as i64..=(lambda - lo).floor() as i64 {
        let mu = lambda - j as f64;
        if mu == 0.0 {
            return Err(Error::Singularity { lambda });
        }
        if !set.contains(mu) {
            continue;
        }
        let slice = g.slice_at(mu)?;
        let Some((s0, s1)) = slice.support() else {
            continue;
        };
        let (p0, p1) = (s0.max(s0 + shift), s1.min(s1 + shift));
        if p0 >= p1 {
            continue;
        }
        // (t − l')/μ ∈ [p0, p1]  ⇔  l' between t − μ·p0 and t − μ·p1
        let (a, b) = {
            let (x, y) = (t - mu * p0, t - mu * p1);
            (x.min(y), x.max(y))
        };
        for n in (a * spec.beta).ceil() as i64..=(b * spec.beta).floor() as i64 {
            let s = (t - n as f64 / spec.beta) / mu;
            terms.push(slice.eval(s - shift) * slice.eval(s).conj());
        }
    }
    Ok(compensated_sum(terms))
}

const JITTER: f64 = FRAC_1_SQRT_2;

/// Jittered sample points `(i + 1/√2)/n` of `[0, period)`.
fn jittered(n: usize, period: f64) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| (i as f64 + JITTER) * period / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaValue {
    pub lambda: f64,
    pub t: f64,
    pub k: i64,
    pub value: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThetaReport {
    pub lambda_points: usize,
    pub t_points: usize,
    pub kmax: i64,
    /// `sup |Θ_0 − 1|` over the grid.
    pub dev_zero: f64,
    /// `sup_{0<|k|≤kmax} |Θ_k|` over the grid.
    pub dev_off: f64,
    pub worst_zero: (f64, f64),
    pub worst_off: (f64, f64, i64),
    #[serde(skip)]
    pub values: Vec<ThetaValue>,
}

/// Evaluates `Θ_k` for `|k| ≤ kmax` on the jittered grid
/// `λ ∈ [0, 1)`, `t ∈ [0, 1/β)` and reports the distance to `δ_k`.
pub fn theta_delta_report<G: VectorField + ?Sized>(
    g: &G,
    spec: QuasiLatticeSpec,
    n_lambda: usize,
    n_t: usize,
    kmax: i64,
) -> Result<ThetaReport> {
    let points: Vec<(f64, f64, i64)> = jittered(n_lambda, 1.0)
        .flat_map(|lam| jittered(n_t, 1.0 / spec.beta).map(move |t| (lam, t)))
        .flat_map(|(lam, t)| (-kmax..=kmax).map(move |k| (lam, t, k)))
        .collect();
    let values: Vec<ThetaValue> = points
        .par_iter()
        .map(|&(lambda, t, k)| {
            Ok(ThetaValue {
                lambda,
                t,
                k,
                value: theta(g, spec, k, lambda, t)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut report = ThetaReport {
        lambda_points: n_lambda,
        t_points: n_t,
        kmax,
        dev_zero: 0.0,
        dev_off: 0.0,
        worst_zero: (f64::NAN, f64::NAN),
        worst_off: (f64::NAN, f64::NAN, 0),
        values: Vec::new(),
    };
    for v in &values {
        if v.k == 0 {
            let d = (v.value - ONE).norm();
            if d > report.dev_zero || report.worst_zero.0.is_nan() {
                report.dev_zero = d;
                report.worst_zero = (v.lambda, v.t);
            }
        } else {
            let d = v.value.norm();
            if d > report.dev_off || report.worst_off.0.is_nan() {
                report.dev_off = d;
                report.worst_off = (v.lambda, v.t, v.k);
            }
        }
    }
    report.values = values;
    Ok(report)
}

/// `∫₀¹ ∫₀^{1/β} e^{2πiλm} e^{-2πiβlt} Θ_k(λ,t) dt dλ` for every `(k, l, m)` in
/// `bounds`, by the jittered midpoint rule with `n × n` points.
///
/// For a Parseval field these are the Gram entries `⟨T̂_{k,l,m} g, g⟩`.
pub fn theta_fourier_table<G: VectorField + ?Sized>(
    g: &G,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
    n: usize,
) -> Result<Vec<(LatticeIndex, Complex64)>> {
    let lams: Vec<f64> = jittered(n, 1.0).collect();
    let ts: Vec<f64> = jittered(n, 1.0 / spec.beta).collect();
    let cell = 1.0 / (n as f64 * n as f64 * spec.beta);
    let mut out = Vec::with_capacity(bounds.len());
    for k in -bounds.k..=bounds.k {
        let grid: Vec<Complex64> = lams
            .par_iter()
            .flat_map_iter(|&lam| ts.iter().map(move |&t| (lam, t)))
            .map(|(lam, t)| theta(g, spec, k, lam, t))
            .collect::<Result<_>>()?;
        for l in -bounds.l..=bounds.l {
            for m in -bounds.m..=bounds.m {
                let mut terms = Vec::with_capacity(grid.len());
                for (i, &lam) in lams.iter().enumerate() {
                    let row = cis2pi(lam * m as f64);
                    for (j, &t) in ts.iter().enumerate() {
                        terms.push(row * cis2pi(-spec.beta * l as f64 * t) * grid[i * n + j]);
                    }
                }
                out.push((LatticeIndex { k, l, m }, compensated_sum(terms) * cell));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DualityReport {
    pub entries: usize,
    pub max_deviation: f64,
    pub worst: LatticeIndex,
}

/// Compares the Fourier coefficients of `Θ_k` for the field `analytic` with
/// the quadrature Gram entries of its sampled version `sampled`.
pub fn theta_gram_duality<G: VectorField + ?Sized>(
    analytic: &G,
    sampled: &FieldSample,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
    n: usize,
) -> Result<DualityReport> {
    let table = theta_fourier_table(analytic, spec, bounds, n)?;
    let gram = coefficient_sequence(sampled, sampled, spec, bounds)?;
    let mut report = DualityReport {
        entries: table.len(),
        max_deviation: 0.0,
        worst: LatticeIndex::ZERO,
    };
    for ((idx, th), gr) in table.iter().zip(&gram) {
        let d = (th - gr).norm();
        if d > report.max_deviation {
            report.max_deviation = d;
            report.worst = *idx;
        }
    }
    Ok(report)
}
