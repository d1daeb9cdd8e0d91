//! Compressible and incompressible MHD states, right-hand sides and the
//! remainder terms of the deviation system.

mod params;
mod physical;
mod remainder;
mod rhs;
mod state;

pub use params::{PhysParams, PressureLaw};
pub use remainder::{remainder_r1, remainder_r2, remainder_r3};
pub use rhs::{
    energy_rate, gradient_sq_norm, k_of_a, rhs_compressible, rhs_incompressible,
    truncate_compressible, CompressibleRhs, IncompressibleRhs,
};
pub use state::{
    divergence_stats, max_magnitude, relative_divergence, validate_state, CompressibleState,
    IncompressibleState, ValidationReport, DIV_TOLERANCE, MEAN_TOLERANCE,
};
