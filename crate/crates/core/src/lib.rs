//! Pseudo-spectral barotropic compressible MHD on the 2-torus, with
//! Littlewood-Paley/Besov diagnostics for the large volume-viscosity limit.

pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod integrate;
pub mod lp;
pub mod models;
pub mod spectral;

pub use error::{Error, Result};
