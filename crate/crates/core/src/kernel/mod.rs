//! Exact number types, multi-indices, the point-set data model and its file
//! format.

pub mod design_file;
pub mod multi_index;
pub mod number;
pub mod point_set;

pub use design_file::{format_design, format_float, parse_design, read_design, write_design};
pub use multi_index::{binomial, enumerate_multi_indices, multi_indices_of_degree, MultiIndex};
pub use number::{
    format_rational, int, kahan_sum, parse_rational, rat, rational_to_f64, KahanSum, PiPoly, PiSum,
    PiValue, Rational, Scalar,
};
pub use point_set::{kind_for_weights, Kind, Measure, WeightedPointSet, SET_TOLERANCE};
