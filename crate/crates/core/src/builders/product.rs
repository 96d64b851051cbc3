//! Unweighted Gaussian designs as products of a 1-D design, indexed by the
//! rows of a t-wise independent array.

use crate::error::Result;
use crate::ffield::{twise_construct, Field, SymbolArray};
use crate::kernel::{Kind, Measure, WeightedPointSet};
use crate::quad1d::unweighted_1d_gaussian_design;

/// A product design together with the array and 1-D symbols it came from.
#[derive(Clone, Debug)]
pub struct ProductDesign {
    pub design: WeightedPointSet,
    pub array: SymbolArray,
    /// Sorted 1-D design; symbol `k` stands for `symbols[k]`.
    pub symbols: Vec<f64>,
}

pub fn gaussian_product_construction(d: usize, t: u32, q: u32, seed: u64) -> Result<ProductDesign> {
    Field::new(q)?;
    let symbols = unweighted_1d_gaussian_design(t, q as usize, seed)?;
    let array = twise_construct(q, d, t, seed)?;
    let points = array
        .rows
        .iter()
        .map(|row| row.iter().map(|&s| symbols[s as usize]).collect())
        .collect();
    let design = WeightedPointSet::from_f64(Measure::Gaussian, Kind::Unweighted, points, None)?
        .with_claimed_strength(Some(t));
    Ok(ProductDesign {
        design,
        array,
        symbols,
    })
}

/// Unweighted Gaussian t-design in `R^d` from a `q`-point 1-D design.
pub fn gaussian_product_design(d: usize, t: u32, q: u32, seed: u64) -> Result<WeightedPointSet> {
    Ok(gaussian_product_construction(d, t, q, seed)?.design)
}
