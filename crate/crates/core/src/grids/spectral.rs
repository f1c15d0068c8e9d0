use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite union of closed intervals `E ⊂ ℝ`, measured with `|λ|dλ`.
///
/// Intervals are kept sorted. Neighbours may share an endpoint (a null set)
/// but may not overlap.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralSet {
    intervals: Vec<(f64, f64)>,
}

impl SpectralSet {
    pub fn new(mut intervals: Vec<(f64, f64)>) -> Result<Self> {
        for &(a, b) in &intervals {
            if !(a.is_finite() && b.is_finite()) || a >= b {
                return Err(Error::InvalidInput(format!(
                    "spectral interval [{a}, {b}] must be finite with a < b"
                )));
            }
        }
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));
        if intervals.windows(2).any(|w| w[0].1 > w[1].0) {
            return Err(Error::Overlap);
        }
        Ok(SpectralSet { intervals })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![(a, b)])
    }

    pub fn empty() -> Self {
        SpectralSet {
            intervals: Vec::new(),
        }
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Parses `a,b[;a,b…]`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::empty());
        }
        let mut intervals = Vec::new();
        for part in text.split(';') {
            let nums: Vec<&str> = part.split(',').map(str::trim).collect();
            if nums.len() != 2 {
                return Err(Error::InvalidInput(format!(
                    "expected `a,b` in spectral set, got `{part}`"
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("`{s}` is not a number")))
            };
            intervals.push((parse(nums[0])?, parse(nums[1])?));
        }
        Self::new(intervals)
    }

    pub fn contains(&self, lambda: f64) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| a <= lambda && lambda <= b)
    }

    /// Smallest interval `[lo, hi]` containing the set.
    pub fn hull(&self) -> Option<(f64, f64)> {
        Some((self.intervals.first()?.0, self.intervals.last()?.1))
    }

    pub fn is_subset_of(&self, lo: f64, hi: f64) -> bool {
        self.intervals.iter().all(|&(a, b)| lo <= a && b <= hi)
    }

    pub fn intersect_interval(&self, lo: f64, hi: f64) -> SpectralSet {
        let intervals = self
            .intervals
            .iter()
            .filter_map(|&(a, b)| {
                let (a, b) = (a.max(lo), b.min(hi));
                (a < b).then_some((a, b))
            })
            .collect();
        SpectralSet { intervals }
    }

    /// True when the two sets share a subset of positive length.
    pub fn overlaps(&self, other: &SpectralSet) -> bool {
        self.intervals
            .iter()
            .any(|&(a, b)| other.intervals.iter().any(|&(c, d)| a.max(c) < b.min(d)))
    }

    /// The pieces `E ∩ [j, j+1)` for every integer `j` meeting `E`.
    pub fn unit_pieces(&self) -> Vec<(i64, SpectralSet)> {
        let Some((lo, hi)) = self.hull() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for j in lo.floor() as i64..=hi.ceil() as i64 {
            let piece = self.intersect_interval(j as f64, j as f64 + 1.0);
            if !piece.is_empty() {
                out.push((j, piece));
            }
        }
        out
    }
}

/// `∫_a^b |λ| dλ` via the antiderivative `λ|λ|/2`.
fn abs_moment(a: f64, b: f64) -> f64 {
    let anti = |x: f64| 0.5 * x * x.abs();
    anti(b) - anti(a)
}

/// Plancherel measure `μ(E) = ∫_E |λ| dλ`, in closed form.
pub fn plancherel_measure(set: &SpectralSet) -> f64 {
    set.intervals.iter().map(|&(a, b)| abs_moment(a, b)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn measure_examples() {
        assert_eq!(
            plancherel_measure(&SpectralSet::interval(-1.0, 1.0).unwrap()),
            1.0
        );
        assert_eq!(
            plancherel_measure(&SpectralSet::interval(0.5, 1.0).unwrap()),
            0.375
        );
        assert_eq!(plancherel_measure(&SpectralSet::empty()), 0.0);
        assert_eq!(
            plancherel_measure(&SpectralSet::interval(-1.0, 0.5).unwrap()),
            0.625
        );
    }

    #[test]
    fn validation() {
        assert!(SpectralSet::interval(1.0, 1.0).is_err());
        assert!(matches!(
            SpectralSet::new(vec![(0.0, 1.0), (0.5, 2.0)]),
            Err(Error::Overlap)
        ));
        assert!(SpectralSet::new(vec![(0.0, 1.0), (-1.0, 0.0)]).is_ok());
    }

    #[test]
    fn parse_forms() {
        let s = SpectralSet::parse("-1,0; 0.25,1").unwrap();
        assert_eq!(s.intervals(), &[(-1.0, 0.0), (0.25, 1.0)]);
        assert!(SpectralSet::parse("1,2,3").is_err());
        assert!(SpectralSet::parse("a,b").is_err());
        assert!(SpectralSet::parse("").unwrap().is_empty());
    }

    #[test]
    fn unit_pieces_split_at_integers() {
        let s = SpectralSet::interval(-1.0, 1.0).unwrap();
        let pieces = s.unit_pieces();
        assert_eq!(pieces.len(), 2);
        assert_eq!(pieces[0].1.intervals(), &[(-1.0, 0.0)]);
        assert_eq!(pieces[1].1.intervals(), &[(0.0, 1.0)]);
    }

    proptest! {
        #[test]
        fn additive_over_disjoint_pieces(a in -3.0f64..3.0, w1 in 0.01f64..2.0, w2 in 0.01f64..2.0) {
            let (b, c) = (a + w1, a + w1 + w2);
            let whole = plancherel_measure(&SpectralSet::interval(a, c).unwrap());
            let parts = plancherel_measure(&SpectralSet::interval(a, b).unwrap())
                + plancherel_measure(&SpectralSet::interval(b, c).unwrap());
            prop_assert!((whole - parts).abs() <= 1e-14 * (1.0 + whole.abs()));
            let union = plancherel_measure(&SpectralSet::new(vec![(a, b), (b, c)]).unwrap());
            prop_assert!((union - parts).abs() <= 1e-15 * (1.0 + whole));
        }
    }
}
