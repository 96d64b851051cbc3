//! Construction, conversion, bounding and verification of spherical and
//! Gaussian designs, with exact rational certificates where the moments allow.

pub mod approx;
pub mod builders;
pub mod error;
pub mod ffield;
pub mod gegenbauer;
pub mod kernel;
pub mod linalg;
pub mod moments;
pub mod quad1d;
pub mod sampling;
pub mod transfer;
pub mod verify;

pub use error::{Error, Result};
pub use kernel::{
    Kind, Measure, MultiIndex, PiPoly, PiSum, PiValue, Rational, Scalar, WeightedPointSet,
};
