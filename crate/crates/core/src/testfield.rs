//! Seeded test fields for the Parseval and orthogonality experiments.
//!
//! Each slice is a piecewise-linear function on a neighbourhood of the
//! reference field's slice support, vanishing at both ends. Sample values are
//! low-order trigonometric polynomials in λ times `sin²(πλ)`, so every
//! coefficient `λ ↦ ⟨atom(λ), f(λ)⟩` is smooth and vanishes at integer λ;
//! this keeps truncated `m`-sums rapidly convergent.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grids::{FieldSample, TimeGrid, Window};
use crate::numeric::TWO_PI;

const KNOTS: usize = 10;
const HARMONICS: usize = 3;

struct Profile {
    // coeffs[j][p] = (cosine weight, sine weight) of harmonic p at knot j
    coeffs: Vec<Vec<(Complex64, Complex64)>>,
}

impl Profile {
    fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = || Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let coeffs = (0..KNOTS)
            .map(|_| (0..HARMONICS).map(|_| (draw(), draw())).collect())
            .collect();
        Profile { coeffs }
    }

    fn value(&self, knot: usize, lambda: f64) -> Complex64 {
        let envelope = (std::f64::consts::PI * lambda).sin().powi(2);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, (c, d)) in self.coeffs[knot].iter().enumerate() {
            let arg = TWO_PI * p as f64 * lambda;
            acc += c * arg.cos() + d * arg.sin();
        }
        acc * envelope
    }
}

/// A seeded test field on the grid of `reference`.
///
/// At each node the slice lives on `[s0 − w, s1 + w]`, where `[s0, s1]` is
/// the support of the reference slice and `w = s1 − s0`. Nodes where the
/// reference slice vanishes get a zero slice.
pub fn smooth_test_field(reference: &FieldSample, seed: u64) -> FieldSample {
    let profile = Profile::new(seed);
    reference.map_slices(|lambda, slice| {
        let Some((s0, s1)) = slice.support() else {
            return Window::zero();
        };
        let w = s1 - s0;
        let count = KNOTS + 2;
        let grid = TimeGrid {
            offset: s0 - w,
            step: 3.0 * w / (count - 1) as f64,
            count,
        };
        let mut samples = vec![Complex64::new(0.0, 0.0); count];
        for (j, z) in samples.iter_mut().enumerate().take(count - 1).skip(1) {
            *z = profile.value(j - 1, lambda);
        }
        Window::Tabulated { grid, samples }
    })
}

/// `count` test fields with seeds `seed, seed + 1, …`.
pub fn smooth_test_fields(reference: &FieldSample, seed: u64, count: usize) -> Vec<FieldSample> {
    (0..count as u64)
        .map(|i| smooth_test_field(reference, seed.wrapping_add(i)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grids::{lambda_grid, SpectralSet};

    fn reference() -> FieldSample {
        let grid = lambda_grid(&SpectralSet::interval(-1.0, 1.0).unwrap(), 16, 1e-3).unwrap();
        FieldSample::from_fn(&grid, |lam| {
            if lam > 0.0 {
                Window::indicator(1.0 / lam - 1.0, 1.0 / lam, 1.0.into())
            } else {
                Window::indicator(-1.0, 0.0, 1.0.into())
            }
        })
        .unwrap()
    }

    #[test]
    fn deterministic_and_seed_dependent() {
        let r = reference();
        assert_eq!(smooth_test_field(&r, 3), smooth_test_field(&r, 3));
        assert_ne!(smooth_test_field(&r, 3), smooth_test_field(&r, 4));
    }

    #[test]
    fn slices_surround_reference_support() {
        let r = reference();
        let f = smooth_test_field(&r, 1);
        for (ref_slice, slice) in r.slices().iter().zip(f.slices()) {
            let (a, b) = ref_slice.support().unwrap();
            let (c, d) = slice.support().unwrap();
            assert!(c >= a - (b - a) - 1e-12 && d <= b + (b - a) + 1e-12);
            assert!(slice.norm_sq() > 0.0);
        }
        assert!(f.norm_sq() > 0.0);
    }
}
