//! Fourier-multiplier operators on periodic fields.
//!
//! Odd multipliers (first derivatives and everything built from them:
//! gradient, divergence, the projectors) use the wavevector with the Nyquist
//! component set to zero, so they map real fields to real fields. Even
//! multipliers (Laplacian and its inverse) use the full wavevector.

use rustfft::num_complex::Complex64;

use super::field::{SpectralField, VectorField};
use super::grid::GridSpec;
use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Per-axis physical wavenumbers for each FFT index.
#[derive(Debug, Clone)]
pub struct Wavenumbers {
    /// `2πk/L` with the Nyquist entry zeroed.
    pub odd: Vec<f64>,
    /// `2πk/L` for every index.
    pub full: Vec<f64>,
}

impl Wavenumbers {
    pub fn new(grid: &GridSpec) -> Self {
        let base = grid.base_wavenumber();
        let full: Vec<f64> = (0..grid.n)
            .map(|i| base * grid.wavenumber(i) as f64)
            .collect();
        let odd = (0..grid.n)
            .map(|i| if grid.is_nyquist(i) { 0.0 } else { full[i] })
            .collect();
        Wavenumbers { odd, full }
    }
}

pub fn derivative(f: &SpectralField, axis: usize) -> Result<SpectralField> {
    let g = f.grid();
    if axis >= g.d {
        return Err(Error::AxisOutOfRange { axis, d: g.d });
    }
    let w = Wavenumbers::new(g);
    let n = g.n;
    Ok(f.apply_multiplier(|idx, _, _| {
        let i = if axis == 0 { idx / n } else { idx % n };
        I * w.odd[i]
    }))
}

pub fn gradient(f: &SpectralField) -> VectorField {
    let comps = (0..f.grid().d)
        .map(|ax| derivative(f, ax).expect("axis in range"))
        .collect();
    VectorField::from_components(comps).expect("components share a grid")
}

pub fn divergence(v: &VectorField) -> SpectralField {
    let mut out = SpectralField::zeros(v.grid());
    for (ax, c) in v.components().iter().enumerate() {
        out = &out + &derivative(c, ax).expect("axis in range");
    }
    out
}

pub fn laplacian(f: &SpectralField) -> SpectralField {
    let w = Wavenumbers::new(f.grid());
    let n = f.grid().n;
    f.apply_multiplier(|idx, _, _| {
        let (a, b) = (w.full[idx / n], w.full[idx % n]);
        Complex64::new(-(a * a + b * b), 0.0)
    })
}

pub fn laplacian_vec(v: &VectorField) -> VectorField {
    v.map(laplacian)
}

/// `Δ⁻¹ f` with the zero mode of the result set to 0.
pub fn inv_laplacian(f: &SpectralField) -> SpectralField {
    let w = Wavenumbers::new(f.grid());
    let n = f.grid().n;
    f.apply_multiplier(|idx, _, _| {
        if idx == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let (a, b) = (w.full[idx / n], w.full[idx % n]);
        Complex64::new(-1.0 / (a * a + b * b), 0.0)
    })
}

/// Splits `v` into `(P v, Q v)` in one pass.
///
/// `Q v = ξ (ξ·v̂)/|ξ|²` per mode; the zero mode (and any mode whose odd
/// wavevector vanishes) goes entirely to `P`.
pub fn helmholtz_split(v: &VectorField) -> (VectorField, VectorField) {
    let g = *v.grid();
    let w = Wavenumbers::new(&g);
    let n = g.n;
    let (vx, vy) = (v.component(0).coeffs(), v.component(1).coeffs());
    let len = g.len();
    let zero = Complex64::new(0.0, 0.0);
    let (mut px, mut py) = (vec![zero; len], vec![zero; len]);
    let (mut qx, mut qy) = (vec![zero; len], vec![zero; len]);
    for idx in 0..len {
        let (a, b) = (w.odd[idx / n], w.odd[idx % n]);
        let k2 = a * a + b * b;
        if k2 == 0.0 {
            px[idx] = vx[idx];
            py[idx] = vy[idx];
            continue;
        }
        let dot = (vx[idx] * a + vy[idx] * b) / k2;
        qx[idx] = dot * a;
        qy[idx] = dot * b;
        px[idx] = vx[idx] - qx[idx];
        py[idx] = vy[idx] - qy[idx];
    }
    let mk = |x, y| {
        VectorField::from_components(vec![
            SpectralField::from_coeffs(&g, x).expect("grid"),
            SpectralField::from_coeffs(&g, y).expect("grid"),
        ])
        .expect("grid")
    };
    (mk(px, py), mk(qx, qy))
}

/// Leray projection `P = Id + (−Δ)⁻¹∇div` onto divergence-free fields.
pub fn project_p(v: &VectorField) -> VectorField {
    helmholtz_split(v).0
}

/// `Q = −(−Δ)⁻¹∇div`, the gradient part; `P + Q = Id`.
pub fn project_q(v: &VectorField) -> VectorField {
    helmholtz_split(v).1
}

/// Zeroes every mode with some `|k_i|` above `dealias_fraction · n/2`.
pub fn dealias(f: &SpectralField) -> SpectralField {
    let g = *f.grid();
    let cut = g.dealias_cutoff();
    f.apply_multiplier(|_, k0, k1| {
        if (k0.abs() as f64) > cut || (k1.abs() as f64) > cut {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, 0.0)
        }
    })
}

pub fn dealias_vec(v: &VectorField) -> VectorField {
    v.map(dealias)
}

/// Dealiased pointwise product of two fields.
pub fn product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.check_same_grid(g)?;
    let a = f.to_samples()?;
    let b = g.to_samples()?;
    let p: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
    Ok(dealias(&SpectralField::from_samples(f.grid(), &p)?))
}

/// Divergence-free field `(∂_y ψ, −∂_x ψ)` from a stream function.
pub fn perp_gradient(psi: &SpectralField) -> VectorField {
    let dx = derivative(psi, 0).expect("axis");
    let dy = derivative(psi, 1).expect("axis");
    VectorField::from_components(vec![dy, dx.scale(-1.0)]).expect("grid")
}
