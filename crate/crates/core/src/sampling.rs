//! Point evaluation, sampling and reconstruction in `H_e`.
//!
//! A function `φ ∈ H_e` is represented by its reduced field `f = V_e(φ)`;
//! its value at `x ∈ N` is `φ(x) = ⟨f, T̂_x e⟩`. For a sampling pair the
//! samples on `Γ_{α,β}` satisfy `Σ_γ |φ(γ)|² = c‖φ‖²` and
//! `φ = (1/c) Σ_γ φ(γ) T̂_γ e`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::fieldcheck::coefficient_sequence;
use crate::grids::{
    check_same_grid, field_inner, plancherel_measure, FieldSample, Segment, SpectralSet, Window,
};
use crate::group::{lattice_enumerate, GroupPoint, LatticeBounds, LatticeIndex, QuasiLatticeSpec};
use crate::numeric::{cis2pi, compensated_sum};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A time-frequency index `(k, l)`.
type TimeFrequency = (i64, i64);

/// Values `φ(γ)` at finitely many lattice points, iterated in lexicographic
/// index order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub spec: QuasiLatticeSpec,
    pub entries: BTreeMap<LatticeIndex, Complex64>,
}

#[derive(Serialize, Deserialize)]
struct SampleRecord {
    k: i64,
    l: i64,
    m: i64,
    re: f64,
    im: f64,
}

impl SampleSet {
    pub fn new(spec: QuasiLatticeSpec) -> Self {
        SampleSet {
            spec,
            entries: BTreeMap::new(),
        }
    }

    /// Pairs `bounds` (in lexicographic order) with `values`.
    pub fn from_sequence(
        spec: QuasiLatticeSpec,
        bounds: LatticeBounds,
        values: &[Complex64],
    ) -> Result<Self> {
        let indices = lattice_enumerate(bounds);
        if indices.len() != values.len() {
            return Err(Error::Shape(format!(
                "{} values for {} lattice points",
                values.len(),
                indices.len()
            )));
        }
        Ok(SampleSet {
            spec,
            entries: indices.into_iter().zip(values.iter().copied()).collect(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: LatticeIndex) -> Option<Complex64> {
        self.entries.get(&idx).copied()
    }

    pub fn energy(&self) -> f64 {
        self.entries.values().map(|z| z.norm_sqr()).sum()
    }

    /// CSV with header `k,l,m,re,im`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for (idx, z) in &self.entries {
            w.serialize(SampleRecord {
                k: idx.k,
                l: idx.l,
                m: idx.m,
                re: z.re,
                im: z.im,
            })
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(spec: QuasiLatticeSpec, input: R) -> Result<Self> {
        let mut set = SampleSet::new(spec);
        for rec in csv::Reader::from_reader(input).deserialize() {
            let r: SampleRecord = rec.map_err(csv_error)?;
            set.entries
                .insert(LatticeIndex::new(r.k, r.l, r.m), Complex64::new(r.re, r.im));
        }
        Ok(set)
    }
}

fn csv_error(e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        line,
        column: 0,
        message: e.to_string(),
    }
}

/// `φ(x) = ⟨f, T̂_x e⟩ = Σ_i w_i ⟨f(λ_i,·), π_{λ_i}(x) e(λ_i,·)⟩`.
pub fn evaluate_phi(f: &FieldSample, e: &FieldSample, x: GroupPoint) -> Result<Complex64> {
    check_same_grid(f.grid(), e.grid())?;
    let terms: Vec<Complex64> = f
        .grid()
        .nodes()
        .par_iter()
        .zip(f.slices().par_iter().zip(e.slices().par_iter()))
        .map(|(n, (fs, es))| fs.inner(&es.represent(n.lambda, x)) * n.weight)
        .collect();
    Ok(compensated_sum(terms))
}

/// `φ(γ)` for every `γ` in `bounds`.
pub fn sample_on_lattice(
    f: &FieldSample,
    e: &FieldSample,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
) -> Result<SampleSet> {
    let coeffs: Vec<Complex64> = coefficient_sequence(e, f, spec, bounds)?
        .iter()
        .map(|c| c.conj())
        .collect();
    SampleSet::from_sequence(spec, bounds, &coeffs)
}

/// `Σ_γ |φ(γ)|² / ‖φ‖²`; tends to `c` for a sampling pair.
pub fn isometry_ratio(samples: &SampleSet, norm_sq: f64) -> Result<f64> {
    if !(norm_sq > 0.0) {
        return Err(Error::InvalidInput(format!(
            "isometry ratio needs a positive norm, got {norm_sq}"
        )));
    }
    Ok(samples.energy() / norm_sq)
}

/// `(1/c) Σ_γ samples[γ] T̂_γ e`.
///
/// Terms sharing `(k, l)` are merged per slice: their `m`-phases add up to a
/// single coefficient in front of the atom `e^{-2πiλβl t} e(λ, t − αk)`.
pub fn reconstruct(samples: &SampleSet, e: &FieldSample, c: f64) -> Result<FieldSample> {
    if !(c > 0.0) {
        return Err(Error::InvalidInput(format!(
            "reconstruction constant must be positive, got {c}"
        )));
    }
    let spec = samples.spec;
    let mut groups: Vec<(TimeFrequency, Vec<(i64, Complex64)>)> = Vec::new();
    for (idx, z) in &samples.entries {
        if *z == Complex64::new(0.0, 0.0) {
            continue;
        }
        match groups.last_mut() {
            Some((key, v)) if *key == (idx.k, idx.l) => v.push((idx.m, *z)),
            _ => groups.push(((idx.k, idx.l), vec![(idx.m, *z)])),
        }
    }
    let scale = 1.0 / c;
    Ok(e.map_slices(|lambda, slice| {
        let base = slice.segments();
        if base.is_empty() || groups.is_empty() {
            return Window::zero();
        }
        let mut segs: Vec<Segment> = Vec::with_capacity(groups.len() * base.len());
        for ((k, l), terms) in &groups {
            let coeff =
                compensated_sum(terms.iter().map(|(m, z)| z * cis2pi(lambda * *m as f64))) * scale;
            let shift = spec.alpha * *k as f64;
            let df = -lambda * spec.beta * *l as f64;
            segs.extend(base.iter().map(|s| s.transformed(shift, df, coeff)));
        }
        Window::Segments(segs)
    }))
}

/// `Σ_γ a_γ T̂_γ e` for the coefficients `a`.
pub fn synthesize(coeffs: &SampleSet, e: &FieldSample) -> Result<FieldSample> {
    reconstruct(coeffs, e, 1.0)
}

/// Seeded coefficients, uniform in the unit square, at every index of `bounds`.
pub fn random_coefficients(spec: QuasiLatticeSpec, bounds: LatticeBounds, seed: u64) -> SampleSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let entries = lattice_enumerate(bounds)
        .into_iter()
        .map(|idx| {
            (
                idx,
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            )
        })
        .collect();
    SampleSet { spec, entries }
}

/// `‖reference − approx‖ / ‖reference‖`.
pub fn relative_l2_error(reference: &FieldSample, approx: &FieldSample) -> Result<f64> {
    let diff = reference.add(&approx.scaled(-ONE))?;
    let norm = reference.norm_sq();
    if !(norm > 0.0) {
        return Err(Error::InvalidInput("reference field has zero norm".into()));
    }
    Ok((field_inner(&diff, &diff)?.re.max(0.0) / norm).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityVerdict {
    pub mu_e: f64,
    /// `1/(αβ)`.
    pub target: f64,
    /// The sampling constant `c = 1/(αβ)` an interpolating pair must have.
    pub c: f64,
    pub interpolation: bool,
    pub ab_leq_one: bool,
    pub e_in_window: bool,
    pub non_integer_lattice: bool,
}

/// Relative tolerance standing in for exact equality of closed-form measures.
const DENSITY_TOL: f64 = 1e-12;

/// `μ(E) = 1/(αβ)` with `αβ ≤ 1` and `E ⊆ [−1/(αβ), 1/(αβ)]`.
pub fn interpolation_verdict(set: &SpectralSet, spec: QuasiLatticeSpec) -> DensityVerdict {
    let mu_e = plancherel_measure(set);
    let target = 1.0 / spec.covolume();
    let ab_leq_one = spec.covolume() <= 1.0;
    let e_in_window = set.is_subset_of(-target, target);
    let density = (mu_e - target).abs() <= DENSITY_TOL * target.max(1.0);
    DensityVerdict {
        mu_e,
        target,
        c: target,
        interpolation: density && ab_leq_one && e_in_window,
        ab_leq_one,
        e_in_window,
        non_integer_lattice: spec.is_non_integer(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramReport {
    pub bounds: LatticeBounds,
    pub tol: f64,
    pub diagonal: Complex64,
    pub max_deviation: f64,
    pub worst: LatticeIndex,
    pub pass: bool,
}

/// `max_γ |⟨T̂_γ e, e⟩ − δ_γ|` over `bounds`.
pub fn onb_gram_check(
    e: &FieldSample,
    spec: QuasiLatticeSpec,
    bounds: LatticeBounds,
    tol: f64,
) -> Result<GramReport> {
    let gram = coefficient_sequence(e, e, spec, bounds)?;
    let mut report = GramReport {
        bounds,
        tol,
        diagonal: Complex64::new(0.0, 0.0),
        max_deviation: 0.0,
        worst: LatticeIndex::ZERO,
        pass: false,
    };
    for (idx, g) in lattice_enumerate(bounds).into_iter().zip(gram) {
        let delta = if idx == LatticeIndex::ZERO {
            ONE
        } else {
            Complex64::new(0.0, 0.0)
        };
        if idx == LatticeIndex::ZERO {
            report.diagonal = g;
        }
        let d = (g - delta).norm();
        if d > report.max_deviation {
            report.max_deviation = d;
            report.worst = idx;
        }
    }
    report.pass = report.max_deviation <= tol;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canonical::canonical_field;
    use crate::fieldcheck::{gram_entry, translate_field};
    use crate::grids::lambda_grid;
    use crate::testfield::smooth_test_field;

    const SPEC: QuasiLatticeSpec = QuasiLatticeSpec::INTEGER;

    fn canon(set: SpectralSet, n: usize) -> FieldSample {
        canonical_field(&lambda_grid(&set, n, 1e-3).unwrap()).unwrap()
    }

    fn unit(n: usize) -> FieldSample {
        canon(SpectralSet::interval(-1.0, 1.0).unwrap(), n)
    }

    #[test]
    fn evaluate_examples() {
        let e = unit(32);
        assert!((evaluate_phi(&e, &e, GroupPoint::IDENTITY).unwrap() - ONE).norm() < 1e-12);
        let far = GroupPoint::new(1.5, 0.0, 0.0).unwrap();
        assert_eq!(evaluate_phi(&e, &e, far).unwrap(), Complex64::new(0.0, 0.0));
        let f = smooth_test_field(&e, 1);
        let g = smooth_test_field(&e, 2);
        let x = GroupPoint::new(0.3, -1.2, 0.7).unwrap();
        let (a, b) = (Complex64::new(0.5, -2.0), Complex64::new(1.5, 0.25));
        let lhs = evaluate_phi(&f.scaled(a).add(&g.scaled(b)).unwrap(), &e, x).unwrap();
        let rhs = a * evaluate_phi(&f, &e, x).unwrap() + b * evaluate_phi(&g, &e, x).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn samples_match_pointwise_evaluation_and_gram() {
        let e = unit(32);
        let f = smooth_test_field(&e, 7);
        let bounds = LatticeBounds::new(1, 2, 2).unwrap();
        let s = sample_on_lattice(&f, &e, SPEC, bounds).unwrap();
        for (idx, v) in &s.entries {
            let direct = evaluate_phi(&f, &e, SPEC.realize(*idx)).unwrap();
            assert!((v - direct).norm() < 1e-12);
        }
        let s = sample_on_lattice(&e, &e, SPEC, bounds).unwrap();
        assert!((s.get(LatticeIndex::ZERO).unwrap() - ONE).norm() < 1e-12);
        assert!(s.get(LatticeIndex::new(1, 0, 0)).unwrap().norm() < 1e-3);
        for (idx, v) in &s.entries {
            let g = gram_entry(&e, *idx, SPEC).unwrap();
            assert!((v - g.conj()).norm() < 1e-12);
        }
        let zero = sample_on_lattice(&FieldSample::zero(e.grid()), &e, SPEC, bounds).unwrap();
        assert_eq!(zero.energy(), 0.0);
    }

    #[test]
    fn left_invariance_of_samples() {
        let e = unit(32);
        let f = smooth_test_field(&e, 3);
        let (k0, l0, m0) = (1, -2, 1);
        let tf = translate_field(&f, LatticeIndex::new(k0, l0, m0), SPEC);
        let bounds = LatticeBounds::new(2, 4, 3).unwrap();
        let shifted = sample_on_lattice(&tf, &e, SPEC, bounds).unwrap();
        let wide = sample_on_lattice(&f, &e, SPEC, LatticeBounds::new(4, 8, 16).unwrap()).unwrap();
        // φ_{T̂_{γ₀}f}(γ) = φ_f(γ₀⁻¹γ), γ₀⁻¹γ = (k − k₀, l − l₀, m − m₀ − k₀(l − l₀))
        for (idx, v) in &shifted.entries {
            let src = LatticeIndex::new(idx.k - k0, idx.l - l0, idx.m - m0 - k0 * (idx.l - l0));
            let want = wide.get(src).unwrap();
            assert!((v - want).norm() < 1e-12, "{idx:?}");
        }
    }

    #[test]
    fn isometry_ratio_examples() {
        let e = unit(128);
        let f = smooth_test_field(&e, 11);
        let mut prev = 0.0;
        for bounds in [
            LatticeBounds::new(1, 4, 4).unwrap(),
            LatticeBounds::new(2, 8, 8).unwrap(),
            LatticeBounds::DEFAULT,
        ] {
            let r = isometry_ratio(
                &sample_on_lattice(&f, &e, SPEC, bounds).unwrap(),
                f.norm_sq(),
            )
            .unwrap();
            assert!(r >= prev);
            prev = r;
        }
        assert!((prev - 1.0).abs() <= 1e-2, "{prev}");
        assert!(isometry_ratio(&SampleSet::new(SPEC), 0.0).is_err());
    }

    #[test]
    fn reconstruction_of_synthesized_functions() {
        let e = unit(128);
        let coeffs = random_coefficients(SPEC, LatticeBounds::new(1, 3, 2).unwrap(), 5);
        let phi = synthesize(&coeffs, &e).unwrap();
        let samples =
            sample_on_lattice(&phi, &e, SPEC, LatticeBounds::new(2, 6, 4).unwrap()).unwrap();
        let rec = reconstruct(&samples, &e, 1.0).unwrap();
        assert!(relative_l2_error(&phi, &rec).unwrap() < 1e-6);
        // samples reproduce the coefficients
        for (idx, a) in &coeffs.entries {
            assert!((samples.get(*idx).unwrap() - a).norm() < 1e-10);
        }
        let again =
            sample_on_lattice(&rec, &e, SPEC, LatticeBounds::new(1, 3, 2).unwrap()).unwrap();
        for (idx, v) in &again.entries {
            assert!((v - samples.get(*idx).unwrap()).norm() < 2e-2);
        }
        let zero = reconstruct(
            &SampleSet::from_sequence(SPEC, LatticeBounds::new(0, 0, 0).unwrap(), &[0.0.into()])
                .unwrap(),
            &e,
            1.0,
        )
        .unwrap();
        assert_eq!(zero.norm_sq(), 0.0);
        assert!(reconstruct(&samples, &e, 0.0).is_err());
    }

    #[test]
    fn reconstruct_e_itself() {
        let e = unit(128);
        let samples = sample_on_lattice(&e, &e, SPEC, LatticeBounds::DEFAULT).unwrap();
        let rec = reconstruct(&samples, &e, 1.0).unwrap();
        assert!(relative_l2_error(&e, &rec).unwrap() <= 1e-3);
    }

    #[test]
    fn density_verdicts() {
        let v = interpolation_verdict(&SpectralSet::interval(-1.0, 1.0).unwrap(), SPEC);
        assert!(v.interpolation && v.mu_e == 1.0 && v.c == 1.0);
        let v = interpolation_verdict(&SpectralSet::interval(-0.5, 0.5).unwrap(), SPEC);
        assert!(!v.interpolation && v.mu_e == 0.25);
        let two = QuasiLatticeSpec::new(2.0, 2.0).unwrap();
        let v = interpolation_verdict(&SpectralSet::interval(-0.5, 0.5).unwrap(), two);
        assert!(!v.interpolation && !v.ab_leq_one && v.mu_e == v.target);
        let v = interpolation_verdict(&SpectralSet::interval(-1.0, 0.5).unwrap(), SPEC);
        assert!(!v.interpolation && v.mu_e == 0.625);
        let v = interpolation_verdict(
            &SpectralSet::interval(-1.0, 1.0).unwrap(),
            QuasiLatticeSpec::new(0.5, 1.0).unwrap(),
        );
        assert!(!v.interpolation && v.target == 2.0 && v.e_in_window && v.non_integer_lattice);
    }

    #[test]
    fn gram_checks() {
        let e = unit(64);
        let r = onb_gram_check(&e, SPEC, LatticeBounds::new(3, 3, 3).unwrap(), 1e-3).unwrap();
        assert!(r.pass, "{r:?}");
        let half = e.scaled(Complex64::new(0.5, 0.0));
        let r = onb_gram_check(&half, SPEC, LatticeBounds::new(1, 1, 1).unwrap(), 1e-3).unwrap();
        assert!(!r.pass && (r.diagonal.re - 0.25).abs() < 1e-12);
        let narrow = canon(SpectralSet::interval(-0.5, 0.5).unwrap(), 64);
        let r = onb_gram_check(&narrow, SPEC, LatticeBounds::new(1, 1, 1).unwrap(), 1e-3).unwrap();
        assert!(!r.pass && (r.diagonal.re - 0.25).abs() < 1e-5);
    }

    #[test]
    fn csv_roundtrip() {
        let s = random_coefficients(SPEC, LatticeBounds::new(1, 1, 1).unwrap(), 9);
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("k,l,m,re,im\n"));
        assert_eq!(SampleSet::read_csv(SPEC, buf.as_slice()).unwrap(), s);
        assert!(matches!(
            SampleSet::read_csv(SPEC, "k,l,m,re,im\n1,2,x,0,0\n".as_bytes()),
            Err(Error::Parse { .. })
        ));
    }
}
