//! Sampling and interpolation for multiplicity-free left-invariant subspaces
//! of `L²(N)`, `N` the three-dimensional Heisenberg group.
//!
//! A multiplicity-free subspace with spectrum `E ⊂ ℝ∖{0}` is identified with
//! `L²(E×ℝ)` where `E` carries the Plancherel measure `|λ|dλ`. Left translates
//! by the quasi-lattice `Γ_{α,β} = αℤ×βℤ×ℤ` become fields of Gabor systems,
//! and the questions of sampling and interpolation reduce to frame and
//! orthonormality properties of those fields.
//!
//! Module map:
//!
//! * [`group`]: group law, quasi-lattice enumeration, Schrödinger representation.
//! * [`grids`]: spectral sets, Plancherel quadrature, discretized fields and IO.
//! * [`gabor`]: per-λ Gabor systems, the painless Parseval criterion and
//!   empirical frame bounds.
//! * [`fieldcheck`]: field-level verification (Gabor fields, Parseval residuals,
//!   the orthogonality condition, the Θ criterion, Gram entries).
//! * [`canonical`]: the indicator vector field over `[-1,1]` and its interval
//!   combinatorics.
//! * [`sinc`]: the sinc-type kernel `S = S₀ + S₁`, closed forms and quadrature.
//! * [`sampling`]: point evaluation, sampling isometry, reconstruction and the
//!   density verdict.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod canonical;
pub mod error;
pub mod fieldcheck;
pub mod gabor;
pub mod grids;
pub mod group;
pub mod numeric;
pub mod sampling;
pub mod sinc;
pub mod testfield;

pub use error::{Error, Result};
pub use grids::{FieldSample, LambdaGrid, Segment, SpectralSet, TimeGrid, VectorField, Window};
pub use group::{GroupPoint, LatticeBounds, LatticeIndex, QuasiLatticeSpec};
