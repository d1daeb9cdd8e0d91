//! Littlewood-Paley blocks, homogeneous Besov norms and the empirical
//! checkers for the product, interpolation and composition estimates.

mod besov;
mod checks;
mod profile;

pub use besov::{
    b21, b21_vec, besov_from_blocks, besov_norm, besov_norm_vec, BesovIndex, SumExponent,
};
pub use checks::{
    check_composition, check_interpolation, check_product, compose_pressure_deviation,
};
pub use profile::{chi, low_high_split, lp_block, lp_lowpass, phi, DyadicProfile, LpDecomposition};
