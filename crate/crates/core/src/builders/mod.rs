//! Concrete design constructions.

mod cross;
mod orbit;
mod pool;
mod product;
pub mod signed_file;

pub use signed_file::{format_signed, parse_signed, read_signed, write_signed};

pub use cross::cross_polytope;
pub use orbit::{
    orbit_moment, orbit_moment_f64, orbit_points, orbit_size, partition_count, partitions_of,
    partitions_up_to, reflection_family_check, sauermann_bound, signed_design,
    signed_design_for_functional, signed_design_with_retries, OrbitDesign, OrbitVerification,
    Partition, ReflectionOutcome, SIGNED_RETRIES,
};
pub use pool::{caratheodory_prune, fit_weights_on_pool, moment_matrix, PRUNE_TOLERANCE};
pub use product::{gaussian_product_construction, gaussian_product_design, ProductDesign};
