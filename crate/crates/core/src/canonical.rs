//! The indicator vector field over `[-1, 1]`:
//!
//! ```text
//! e_λ = 1_{[1/λ − 1, 1/λ]}   for λ ∈ (0, 1],
//! e_λ = 1_{[−1, 0]}          for λ ∈ [−1, 0).
//! ```
//!
//! Every slice has unit norm and `μ([−1, 1]) = 1`, so its lattice translates
//! form an orthonormal basis for `α = β = 1`.

use num_complex::Complex64;
use num_traits::{FromPrimitive, Num};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grids::{FieldSample, LambdaGrid, SpectralSet, VectorField, Window};
use crate::sinc::Reading;

/// The canonical field as an analytic [`VectorField`].
///
/// The positive-λ formula `1_{[1/λ−1, 1/λ]}` is used for every `λ > 0` and
/// `1_{[−1,0]}` for every `λ < 0`, so the same field can be restricted to or
/// extended over other spectral sets.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalField {
    spectral: SpectralSet,
    scale: f64,
}

impl CanonicalField {
    /// The field on `E = [−1, 1]`.
    pub fn unit() -> Self {
        CanonicalField {
            spectral: SpectralSet::interval(-1.0, 1.0).expect("valid interval"),
            scale: 1.0,
        }
    }

    /// The same slice formula over an arbitrary spectral set.
    pub fn on(spectral: SpectralSet) -> Self {
        CanonicalField {
            spectral,
            scale: 1.0,
        }
    }

    pub fn scaled(self, c: f64) -> Self {
        CanonicalField {
            scale: self.scale * c,
            ..self
        }
    }
}

impl VectorField for CanonicalField {
    fn slice_at(&self, lambda: f64) -> Result<Window> {
        if !self.spectral.contains(lambda) {
            return Ok(Window::zero());
        }
        let scale = Complex64::new(self.scale, 0.0);
        if lambda > 0.0 {
            Window::indicator(1.0 / lambda - 1.0, 1.0 / lambda, scale)
        } else if lambda < 0.0 {
            Window::indicator(-1.0, 0.0, scale)
        } else {
            Err(Error::Singularity { lambda })
        }
    }

    fn spectral_set(&self) -> &SpectralSet {
        &self.spectral
    }
}

/// The canonical field sampled at the nodes of `grid`, which must lie in
/// `[−1, 1]`.
pub fn canonical_field(grid: &LambdaGrid) -> Result<FieldSample> {
    if let Some(n) = grid.nodes().iter().find(|n| n.lambda.abs() > 1.0) {
        return Err(Error::Domain(format!(
            "canonical field is defined on [-1, 1]; node at lambda = {}",
            n.lambda
        )));
    }
    canonical_field_extended(grid)
}

/// The canonical slice formula at every node of `grid`, wherever it lies.
pub fn canonical_field_extended(grid: &LambdaGrid) -> Result<FieldSample> {
    FieldSample::from_field(grid, &CanonicalField::on(grid.spectral_set().clone()))
}

/// The intervals `I_k^{λ−1}` and `I_k^λ` carrying the `k`-th translates of
/// the slices at `λ − 1` and `λ` after dilation by the modulation spacing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IntervalPair<T> {
    pub prev: (T, T),
    pub cur: (T, T),
}

/// `I_k^{λ−1} = [−(1−λ)k, −(1−λ)k + (1−λ)]` and `I_k^λ = [1 + λk − λ, 1 + λk]`.
///
/// Generic so the interval algebra can run in exact rational arithmetic.
pub fn intervals_ik<T>(lambda: T, k: i64) -> IntervalPair<T>
where
    T: Num + Copy + FromPrimitive,
{
    let one = T::one();
    let kk = T::from_i64(k).expect("k representable");
    let gap = one - lambda;
    let prev_lo = T::zero() - gap * kk;
    IntervalPair {
        prev: (prev_lo, prev_lo + gap),
        cur: (one + lambda * kk - lambda, one + lambda * kk),
    }
}

/// True iff `I_k^{λ−1}` and `I_k^λ` have disjoint interiors and
/// `(I_k^{λ−1} + k) ∪ I_k^λ = [λk, λk + 1]`. Requires `λ ∈ (0, 1)`.
///
/// Comparisons are exact; use a rational type for a certificate.
pub fn tiling_check<T>(lambda: T, k: i64) -> bool
where
    T: Num + Copy + FromPrimitive + PartialOrd,
{
    if !(lambda > T::zero() && lambda < T::one()) {
        return false;
    }
    let IntervalPair { prev, cur } = intervals_ik(lambda, k);
    let disjoint = prev.1 <= cur.0 || cur.1 <= prev.0;
    let kk = T::from_i64(k).expect("k representable");
    let shifted = (prev.0 + kk, prev.1 + kk);
    let (first, second) = if shifted.0 <= cur.0 {
        (shifted, cur)
    } else {
        (cur, shifted)
    };
    let connected = first.1 >= second.0;
    let hi = if first.1 >= second.1 {
        first.1
    } else {
        second.1
    };
    let target = (lambda * kk, lambda * kk + T::one());
    disjoint && connected && first.0 == target.0 && hi == target.1
}

/// The intervals `J_x` and `I_{x,λ}` entering the sinc kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SincIntervals {
    pub j: Option<(f64, f64)>,
    pub i: Option<(f64, f64)>,
}

fn intersect_shift(lo: f64, hi: f64, x: f64) -> Option<(f64, f64)> {
    let (a, b) = (lo.max(lo + x), hi.min(hi + x));
    (a < b).then_some((a, b))
}

/// `J_x = [−1, 0] ∩ ([−1, 0] + x)` and `I_{x,λ} = B ∩ (B + x)`, with
/// `B = [−1/λ − 1, 1/λ]` as printed or `B = [1/λ − 1, 1/λ]` (the support of
/// `e_λ`) when corrected.
pub fn sinc_intervals(x: f64, lambda: f64, reading: Reading) -> Result<SincIntervals> {
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::Domain(format!(
            "sinc intervals need lambda in (0, 1], got {lambda}"
        )));
    }
    let lo = match reading {
        Reading::AsPrinted => -1.0 / lambda - 1.0,
        Reading::Corrected => 1.0 / lambda - 1.0,
    };
    Ok(SincIntervals {
        j: intersect_shift(-1.0, 0.0, x),
        i: intersect_shift(lo, 1.0 / lambda, x),
    })
}
