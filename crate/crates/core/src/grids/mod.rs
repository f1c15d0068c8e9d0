//! Spectral sets, Plancherel quadrature and discretized fields in `L²(E×ℝ)`.

mod field;
pub mod io;
mod spectral;
mod window;

pub(crate) use field::check_same_grid;
pub use field::{
    field_inner, lambda_grid, FieldSample, LambdaGrid, LambdaNode, VectorField, DEFAULT_LAMBDA_MIN,
};
pub use io::{field_from_str, field_load, field_save, field_to_string};
pub use spectral::{plancherel_measure, SpectralSet};
pub use window::{periodize_unit, segments_inner, Segment, TimeGrid, Window};
