//! Periodic-grid transforms, spectral differential operators, dealiasing and
//! the Helmholtz projectors `P` and `Q`.

mod field;
mod grid;
mod ops;

pub use field::{
    coordinates, sample_fn, transform_forward, transform_inverse, SpectralField, VectorField,
    HERMITIAN_TOLERANCE,
};
pub use grid::GridSpec;
pub use ops::{
    dealias, dealias_vec, derivative, divergence, gradient, helmholtz_split, inv_laplacian,
    laplacian, laplacian_vec, perp_gradient, product, project_p, project_q, Wavenumbers,
};
pub use rustfft::num_complex::Complex64;
