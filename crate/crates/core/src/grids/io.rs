//! Field files: one JSON document per field.
//!
//! ```text
//! {
//!   "format": "hgs-field",
//!   "version": 1,
//!   "spectral_set": [[a, b], ...],
//!   "lambda_min": x,
//!   "nodes": [
//!     { "lambda": x, "weight": x, "cell": [lo, hi],
//!       "slice": { "indicator": { "a": x, "b": x, "scale": [re, im] } } },
//!     { ..., "slice": { "segments": [ { "a", "b", "c0": [re, im], "c1": [re, im], "freq" } ] } },
//!     { ..., "slice": { "tabulated": { "offset": x, "step": x, "count": n,
//!                                      "samples": [re0, im0, re1, im1, ...] } } }
//!   ]
//! }
//! ```
//!
//! Every real number is written in scientific notation with 17 significant
//! digits, so loading a saved field reproduces it bit for bit.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::path::Path;
use std::str::FromStr;

use super::field::{FieldSample, LambdaGrid, LambdaNode};
use super::spectral::SpectralSet;
use super::window::{Segment, TimeGrid, Window};
use crate::error::{Error, Result};

pub const FORMAT_TAG: &str = "hgs-field";
pub const FORMAT_VERSION: u32 = 1;

/// A real number serialized with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!(
                "non-finite value {}",
                self.0
            )));
        }
        let text = format!("{:.16e}", self.0);
        let num = serde_json::Number::from_str(&text).map_err(serde::ser::Error::custom)?;
        num.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let num = serde_json::Number::deserialize(d)?;
        f64::from_str(num.as_str())
            .map(Real)
            .map_err(serde::de::Error::custom)
    }
}

type Pair = [Real; 2];

fn pair(z: Complex64) -> Pair {
    [Real(z.re), Real(z.im)]
}

fn complex(p: &Pair) -> Complex64 {
    Complex64::new(p[0].0, p[1].0)
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FieldFile {
    format: String,
    version: u32,
    spectral_set: Vec<Pair>,
    lambda_min: Real,
    nodes: Vec<NodeRecord>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeRecord {
    lambda: Real,
    weight: Real,
    cell: Pair,
    slice: SliceRecord,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum SliceRecord {
    Indicator {
        a: Real,
        b: Real,
        scale: Pair,
    },
    Segments(Vec<SegmentRecord>),
    Tabulated {
        offset: Real,
        step: Real,
        count: usize,
        samples: Vec<Real>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentRecord {
    a: Real,
    b: Real,
    c0: Pair,
    c1: Pair,
    freq: Real,
}

fn slice_record(w: &Window) -> SliceRecord {
    match w {
        Window::Indicator { a, b, scale } => SliceRecord::Indicator {
            a: Real(*a),
            b: Real(*b),
            scale: pair(*scale),
        },
        Window::Segments(segs) => SliceRecord::Segments(
            segs.iter()
                .map(|s| SegmentRecord {
                    a: Real(s.a),
                    b: Real(s.b),
                    c0: pair(s.c0),
                    c1: pair(s.c1),
                    freq: Real(s.freq),
                })
                .collect(),
        ),
        Window::Tabulated { grid, samples } => SliceRecord::Tabulated {
            offset: Real(grid.offset),
            step: Real(grid.step),
            count: grid.count,
            samples: samples
                .iter()
                .flat_map(|z| [Real(z.re), Real(z.im)])
                .collect(),
        },
    }
}

fn window_from_record(rec: SliceRecord) -> Result<Window> {
    match rec {
        SliceRecord::Indicator { a, b, scale } => Window::indicator(a.0, b.0, complex(&scale)),
        SliceRecord::Segments(segs) => Ok(Window::Segments(
            segs.iter()
                .map(|s| Segment {
                    a: s.a.0,
                    b: s.b.0,
                    c0: complex(&s.c0),
                    c1: complex(&s.c1),
                    freq: s.freq.0,
                })
                .collect(),
        )),
        SliceRecord::Tabulated {
            offset,
            step,
            count,
            samples,
        } => {
            if samples.len() != 2 * count {
                return Err(Error::Shape(format!(
                    "tabulated slice declares {count} samples but lists {} numbers",
                    samples.len()
                )));
            }
            let grid = TimeGrid::new(offset.0, step.0, count)?;
            let samples = samples
                .chunks_exact(2)
                .map(|c| Complex64::new(c[0].0, c[1].0))
                .collect();
            Window::tabulated(grid, samples)
        }
    }
}

pub fn field_to_string(f: &FieldSample) -> Result<String> {
    let grid = f.grid();
    let doc = FieldFile {
        format: FORMAT_TAG.to_string(),
        version: FORMAT_VERSION,
        spectral_set: grid
            .spectral_set()
            .intervals()
            .iter()
            .map(|&(a, b)| [Real(a), Real(b)])
            .collect(),
        lambda_min: Real(grid.lambda_min()),
        nodes: grid
            .nodes()
            .iter()
            .zip(f.slices())
            .map(|(n, w)| NodeRecord {
                lambda: Real(n.lambda),
                weight: Real(n.weight),
                cell: [Real(n.lo), Real(n.hi)],
                slice: slice_record(w),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).map_err(|e| Error::InvalidInput(e.to_string()))
}

pub fn field_from_str(text: &str) -> Result<FieldSample> {
    let doc: FieldFile = serde_json::from_str(text)?;
    if doc.format != FORMAT_TAG {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unknown format tag `{}`", doc.format),
        });
    }
    if doc.version != FORMAT_VERSION {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("unsupported version {}", doc.version),
        });
    }
    let spectral = SpectralSet::new(doc.spectral_set.iter().map(|p| (p[0].0, p[1].0)).collect())?;
    let mut nodes = Vec::with_capacity(doc.nodes.len());
    let mut slices = Vec::with_capacity(doc.nodes.len());
    for rec in doc.nodes {
        nodes.push(LambdaNode {
            lambda: rec.lambda.0,
            weight: rec.weight.0,
            lo: rec.cell[0].0,
            hi: rec.cell[1].0,
        });
        slices.push(window_from_record(rec.slice)?);
    }
    let grid = LambdaGrid::from_parts(spectral, doc.lambda_min.0, nodes)?;
    FieldSample::new(grid, slices)
}

pub fn field_save(f: &FieldSample, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, field_to_string(f)?)?;
    Ok(())
}

pub fn field_load(path: impl AsRef<Path>) -> Result<FieldSample> {
    field_from_str(&std::fs::read_to_string(path)?)
}
