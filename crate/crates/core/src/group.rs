//! Heisenberg group arithmetic, the quasi-lattices `Γ_{α,β}` and the
//! Schrödinger representation acting on time-domain windows.

use serde::{Deserialize, Serialize};
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::grids::Window;

/// A point `(x₁, x₂, x₃)` of `N ≅ ℝ³`.
///
/// The group law is `(x₁,x₂,x₃)·(y₁,y₂,y₃) = (x₁+y₁, x₂+y₂, x₃+y₃+x₁y₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl GroupPoint {
    pub const IDENTITY: GroupPoint = GroupPoint {
        x1: 0.0,
        x2: 0.0,
        x3: 0.0,
    };

    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        if !(x1.is_finite() && x2.is_finite() && x3.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "group point ({x1}, {x2}, {x3}) has a non-finite coordinate"
            )));
        }
        Ok(GroupPoint { x1, x2, x3 })
    }

    pub fn inverse(self) -> Self {
        group_inv(self)
    }
}

impl Mul for GroupPoint {
    type Output = GroupPoint;

    fn mul(self, rhs: GroupPoint) -> GroupPoint {
        group_mul(self, rhs)
    }
}

pub fn group_mul(a: GroupPoint, b: GroupPoint) -> GroupPoint {
    GroupPoint {
        x1: a.x1 + b.x1,
        x2: a.x2 + b.x2,
        x3: a.x3 + b.x3 + a.x1 * b.x2,
    }
}

pub fn group_inv(a: GroupPoint) -> GroupPoint {
    GroupPoint {
        x1: -a.x1,
        x2: -a.x2,
        x3: -a.x3 + a.x1 * a.x2,
    }
}

/// Spacing parameters of `Γ_{α,β} = αℤ × βℤ × ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiLatticeSpec {
    pub alpha: f64,
    pub beta: f64,
}

impl QuasiLatticeSpec {
    pub const INTEGER: QuasiLatticeSpec = QuasiLatticeSpec {
        alpha: 1.0,
        beta: 1.0,
    };

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha > 0.0 && beta.is_finite() && beta > 0.0) {
            return Err(Error::InvalidInput(format!(
                "alpha and beta must be positive and finite, got ({alpha}, {beta})"
            )));
        }
        Ok(QuasiLatticeSpec { alpha, beta })
    }

    /// `αβ`, the covolume of the lattice part in the first two coordinates.
    pub fn covolume(&self) -> f64 {
        self.alpha * self.beta
    }

    /// True when α or β is not a positive integer; reports flag this case.
    pub fn is_non_integer(&self) -> bool {
        self.alpha.fract() != 0.0 || self.beta.fract() != 0.0
    }

    pub fn realize(&self, idx: LatticeIndex) -> GroupPoint {
        GroupPoint {
            x1: self.alpha * idx.k as f64,
            x2: self.beta * idx.l as f64,
            x3: idx.m as f64,
        }
    }
}

/// An index `(k, l, m)` realized as `(αk, βl, m) ∈ Γ_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeIndex {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

impl LatticeIndex {
    pub const ZERO: LatticeIndex = LatticeIndex { k: 0, l: 0, m: 0 };

    pub fn new(k: i64, l: i64, m: i64) -> Self {
        LatticeIndex { k, l, m }
    }
}

/// Truncation box `|k| ≤ k, |l| ≤ l, |m| ≤ m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBounds {
    pub k: i64,
    pub l: i64,
    pub m: i64,
}

impl LatticeBounds {
    pub const DEFAULT: LatticeBounds = LatticeBounds { k: 4, l: 32, m: 16 };

    pub fn new(k: i64, l: i64, m: i64) -> Result<Self> {
        if k < 0 || l < 0 || m < 0 {
            return Err(Error::InvalidInput(format!(
                "lattice bounds must be nonnegative, got ({k}, {l}, {m})"
            )));
        }
        Ok(LatticeBounds { k, l, m })
    }

    pub fn doubled(&self) -> Self {
        LatticeBounds {
            k: 2 * self.k,
            l: 2 * self.l,
            m: 2 * self.m,
        }
    }

    pub fn contains(&self, idx: LatticeIndex) -> bool {
        idx.k.abs() <= self.k && idx.l.abs() <= self.l && idx.m.abs() <= self.m
    }

    pub fn len(&self) -> usize {
        ((2 * self.k + 1) * (2 * self.l + 1) * (2 * self.m + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// All indices inside `bounds`, lexicographic in `(k, l, m)`.
pub fn lattice_enumerate(bounds: LatticeBounds) -> Vec<LatticeIndex> {
    let mut out = Vec::with_capacity(bounds.len());
    for k in -bounds.k..=bounds.k {
        for l in -bounds.l..=bounds.l {
            for m in -bounds.m..=bounds.m {
                out.push(LatticeIndex { k, l, m });
            }
        }
    }
    out
}

/// `(π_λ(x)f)(t) = e^{2πiλx₃} e^{-2πiλx₂t} f(t − x₁)`.
pub fn schrodinger_apply(lambda: f64, x: GroupPoint, f: &Window) -> Result<Window> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::Domain(format!(
            "the Schrödinger representation needs a finite nonzero lambda, got {lambda}"
        )));
    }
    Ok(f.represent(lambda, x))
}
