use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spectral::SpectralSet;
use super::window::Window;
use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

/// Default cutoff around `λ = 0` for [`lambda_grid`].
pub const DEFAULT_LAMBDA_MIN: f64 = 1e-3;

/// One quadrature node: a cell `[lo, hi)` of `E`, its midpoint and the
/// Plancherel weight `|λ|·(hi − lo)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaNode {
    pub lambda: f64,
    pub weight: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Composite midpoint rule for `∫_E f(λ) |λ| dλ`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaGrid {
    spectral: SpectralSet,
    lambda_min: f64,
    nodes: Vec<LambdaNode>,
}

impl LambdaGrid {
    /// Assembles a grid from stored parts; nodes must be sorted by λ.
    pub fn from_parts(
        spectral: SpectralSet,
        lambda_min: f64,
        nodes: Vec<LambdaNode>,
    ) -> Result<Self> {
        if !(lambda_min > 0.0) {
            return Err(Error::InvalidInput(format!(
                "lambda_min must be positive, got {lambda_min}"
            )));
        }
        for n in &nodes {
            if n.lambda == 0.0
                || n.weight < 0.0
                || !(n.lo < n.hi)
                || !(n.lo <= n.lambda && n.lambda <= n.hi)
            {
                return Err(Error::InvalidInput(format!(
                    "malformed quadrature node {n:?}"
                )));
            }
        }
        if nodes.windows(2).any(|w| w[0].lambda >= w[1].lambda) {
            return Err(Error::InvalidInput(
                "quadrature nodes must be strictly increasing".into(),
            ));
        }
        Ok(LambdaGrid {
            spectral,
            lambda_min,
            nodes,
        })
    }

    pub fn spectral_set(&self) -> &SpectralSet {
        &self.spectral
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda_min
    }

    pub fn nodes(&self) -> &[LambdaNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|n| n.weight).sum()
    }

    /// Index of the cell containing `lambda`, if any.
    pub fn locate(&self, lambda: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|n| n.hi <= lambda);
        let n = self.nodes.get(i)?;
        (n.lo <= lambda && lambda < n.hi).then_some(i)
    }

    /// Index of the node whose λ equals `lambda` up to `1e-12` relative.
    pub fn node_index(&self, lambda: f64) -> Option<usize> {
        let i = self.locate(lambda)?;
        ((self.nodes[i].lambda - lambda).abs() <= 1e-12 * lambda.abs().max(1.0)).then_some(i)
    }

    /// Midpoint quadrature `Σ_i w_i f(λ_i)`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().map(|n| n.weight * f(n.lambda)).sum()
    }
}

/// Builds the composite midpoint grid on `E ∖ (−λ_min, λ_min)`.
///
/// Each interval of `E` is split into `n_per_interval` equal cells, a cell
/// straddling `λ = 0` is split there. A cell whose midpoint lies at least
/// `λ_min` from zero is kept whole; any other cell keeps only its part outside
/// `(−λ_min, λ_min)`, if any. `|λ|` is linear on every cell, so the weights
/// `|λ_i|·width_i` are exact cell measures. Whole cells keep the uniform
/// spacing, so nodes at `λ` and `λ − 1` pair up whenever the cell width
/// divides one and no cell was cut.
pub fn lambda_grid(
    set: &SpectralSet,
    n_per_interval: usize,
    lambda_min: f64,
) -> Result<LambdaGrid> {
    if n_per_interval == 0 {
        return Err(Error::InvalidInput(
            "n_per_interval must be at least 1".into(),
        ));
    }
    if !(lambda_min > 0.0 && lambda_min.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "lambda_min must be positive, got {lambda_min}"
        )));
    }
    let mut nodes = Vec::new();
    for &(a, b) in set.intervals() {
        let h = (b - a) / n_per_interval as f64;
        for j in 0..n_per_interval {
            let lo = a + j as f64 * h;
            let hi = if j + 1 == n_per_interval {
                b
            } else {
                a + (j + 1) as f64 * h
            };
            for (mut plo, mut phi) in [(lo, hi.min(0.0)), (lo.max(0.0), hi)] {
                if (0.5 * (plo + phi)).abs() < lambda_min {
                    if phi <= 0.0 {
                        phi = phi.min(-lambda_min);
                    } else {
                        plo = plo.max(lambda_min);
                    }
                }
                if plo < phi {
                    let mid = 0.5 * (plo + phi);
                    nodes.push(LambdaNode {
                        lambda: mid,
                        weight: mid.abs() * (phi - plo),
                        lo: plo,
                        hi: phi,
                    });
                }
            }
        }
    }
    if nodes.is_empty() {
        return Err(Error::EmptyGrid { lambda_min });
    }
    nodes.sort_by(|x, y| x.lambda.total_cmp(&y.lambda));
    Ok(LambdaGrid {
        spectral: set.clone(),
        lambda_min,
        nodes,
    })
}

/// Anything that can produce the slice `g(λ, ·)` at a given λ.
///
/// Slices outside the spectral set are zero.
pub trait VectorField: Sync {
    fn slice_at(&self, lambda: f64) -> Result<Window>;

    fn spectral_set(&self) -> &SpectralSet;
}

/// A discretized element of `L²(E×ℝ)`: one slice per quadrature node.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSample {
    grid: LambdaGrid,
    slices: Vec<Window>,
}

impl FieldSample {
    pub fn new(grid: LambdaGrid, slices: Vec<Window>) -> Result<Self> {
        if slices.len() != grid.len() {
            return Err(Error::Shape(format!(
                "{} slices for {} quadrature nodes",
                slices.len(),
                grid.len()
            )));
        }
        Ok(FieldSample { grid, slices })
    }

    pub fn from_fn<F>(grid: &LambdaGrid, f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<Window> + Sync,
    {
        let slices = grid
            .nodes()
            .par_iter()
            .map(|n| f(n.lambda))
            .collect::<Result<Vec<_>>>()?;
        Ok(FieldSample {
            grid: grid.clone(),
            slices,
        })
    }

    /// Samples an arbitrary vector field at the grid nodes.
    pub fn from_field<V: VectorField + ?Sized>(grid: &LambdaGrid, field: &V) -> Result<Self> {
        Self::from_fn(grid, |lam| field.slice_at(lam))
    }

    pub fn zero(grid: &LambdaGrid) -> Self {
        FieldSample {
            grid: grid.clone(),
            slices: vec![Window::zero(); grid.len()],
        }
    }

    pub fn grid(&self) -> &LambdaGrid {
        &self.grid
    }

    pub fn slices(&self) -> &[Window] {
        &self.slices
    }

    pub fn slice(&self, i: usize) -> &Window {
        &self.slices[i]
    }

    pub fn map_slices<F>(&self, f: F) -> FieldSample
    where
        F: Fn(f64, &Window) -> Window + Sync,
    {
        let slices = self
            .grid
            .nodes()
            .par_iter()
            .zip(self.slices.par_iter())
            .map(|(n, w)| f(n.lambda, w))
            .collect();
        FieldSample {
            grid: self.grid.clone(),
            slices,
        }
    }

    pub fn scaled(&self, c: Complex64) -> FieldSample {
        self.map_slices(|_, w| w.scaled(c))
    }

    /// `g·1_{piece}`: slices at nodes outside `piece` are set to zero.
    pub fn restricted(&self, piece: &SpectralSet) -> FieldSample {
        self.map_slices(|lam, w| {
            if piece.contains(lam) {
                w.clone()
            } else {
                Window::zero()
            }
        })
    }

    pub fn add(&self, other: &FieldSample) -> Result<FieldSample> {
        check_same_grid(&self.grid, &other.grid)?;
        let slices = self
            .slices
            .iter()
            .zip(&other.slices)
            .map(|(a, b)| a.add(b))
            .collect();
        Ok(FieldSample {
            grid: self.grid.clone(),
            slices,
        })
    }

    pub fn norm_sq(&self) -> f64 {
        field_inner(self, self).map(|z| z.re).unwrap_or(0.0)
    }
}

impl VectorField for FieldSample {
    /// Piecewise constant in λ: the slice of the cell containing λ.
    fn slice_at(&self, lambda: f64) -> Result<Window> {
        match self.grid.locate(lambda) {
            Some(i) => Ok(self.slices[i].clone()),
            None if self.grid.spectral.contains(lambda) => Err(Error::MissingSlice { lambda }),
            None => Ok(Window::zero()),
        }
    }

    fn spectral_set(&self) -> &SpectralSet {
        &self.grid.spectral
    }
}

pub(crate) fn check_same_grid(a: &LambdaGrid, b: &LambdaGrid) -> Result<()> {
    if a.nodes.len() != b.nodes.len()
        || a.nodes
            .iter()
            .zip(&b.nodes)
            .any(|(x, y)| x.lambda != y.lambda || x.weight != y.weight)
    {
        return Err(Error::Shape("fields live on different lambda grids".into()));
    }
    Ok(())
}

/// `⟨f, g⟩ = Σ_i w_i ⟨f(λ_i,·), g(λ_i,·)⟩_{L²(ℝ)}`.
///
/// Slices are processed in parallel; the final sum runs in node order.
pub fn field_inner(f: &FieldSample, g: &FieldSample) -> Result<Complex64> {
    check_same_grid(&f.grid, &g.grid)?;
    let terms: Vec<Complex64> = f
        .grid
        .nodes
        .par_iter()
        .zip(f.slices.par_iter().zip(g.slices.par_iter()))
        .map(|(n, (a, b))| a.inner(b) * n.weight)
        .collect();
    Ok(compensated_sum(terms))
}
