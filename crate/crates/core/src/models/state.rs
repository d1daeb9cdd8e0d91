use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{divergence, gradient, GridSpec, SpectralField, VectorField};

/// Relative tolerance on `‖div b‖∞` for a valid state.
pub const DIV_TOLERANCE: f64 = 1e-10;
/// Absolute tolerance on the drift of `mean(a)`.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// `(a, u, b)` with `a = ρ − 1`, evolved in velocity form.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressibleState {
    pub a: SpectralField,
    pub u: VectorField,
    pub b: VectorField,
    pub t: f64,
}

/// `(U, B)` of the incompressible limit system; both divergence free.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompressibleState {
    pub u: VectorField,
    pub b: VectorField,
    pub t: f64,
}

impl CompressibleState {
    pub fn zeros(grid: &GridSpec) -> Self {
        CompressibleState {
            a: SpectralField::zeros(grid),
            u: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.a.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.u.is_finite() && self.b.is_finite() && self.t.is_finite()
    }

    /// Pointwise minimum of `ρ = 1 + a`.
    pub fn min_density(&self) -> Result<f64> {
        Ok(1.0
            + self
                .a
                .to_samples()?
                .into_iter()
                .fold(f64::INFINITY, f64::min))
    }

    pub fn max_density(&self) -> Result<f64> {
        Ok(1.0
            + self
                .a
                .to_samples()?
                .into_iter()
                .fold(f64::NEG_INFINITY, f64::max))
    }
}

impl IncompressibleState {
    pub fn zeros(grid: &GridSpec) -> Self {
        IncompressibleState {
            u: VectorField::zeros(grid),
            b: VectorField::zeros(grid),
            t: 0.0,
        }
    }

    pub fn grid(&self) -> &GridSpec {
        self.u.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.u.is_finite() && self.b.is_finite() && self.t.is_finite()
    }

    /// `½‖U‖² + ½‖B‖²` split as (kinetic, magnetic).
    pub fn energies(&self) -> (f64, f64) {
        (
            0.5 * self.u.l2_norm().powi(2),
            0.5 * self.b.l2_norm().powi(2),
        )
    }
}

/// Pointwise maximum of the Euclidean magnitude of a vector field.
pub fn max_magnitude(v: &VectorField) -> Result<f64> {
    let s = v.to_samples()?;
    let mut m: f64 = 0.0;
    for i in 0..s[0].len() {
        let mag = s.iter().map(|c| c[i] * c[i]).sum::<f64>().sqrt();
        m = m.max(mag);
    }
    Ok(m)
}

/// `(max |div v|, max |∂_j v_i|)` in physical space.
pub fn divergence_stats(v: &VectorField) -> Result<(f64, f64)> {
    let div = divergence(v).to_samples()?;
    let max_div = div.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let mut max_grad: f64 = 0.0;
    for c in v.components() {
        for d in gradient(c).to_samples()? {
            max_grad = max_grad.max(d.iter().map(|x| x.abs()).fold(0.0, f64::max));
        }
    }
    Ok((max_div, max_grad))
}

/// `max|div v| / max|∇v|`, or 0 for a constant field.
pub fn relative_divergence(v: &VectorField) -> Result<f64> {
    let (d, g) = divergence_stats(v)?;
    Ok(if g > 0.0 { d / g } else { d })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub min_density: f64,
    pub max_div_b: f64,
    /// `max|div b|` relative to `max|∇b|`.
    pub relative_div_b: f64,
    pub mean_a: f64,
    pub mean_drift: f64,
    pub density_ok: bool,
    pub div_b_ok: bool,
    pub mean_ok: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.density_ok && self.div_b_ok && self.mean_ok
    }
}

/// Checks positivity of the density, the magnetic constraint and mass
/// conservation against `reference_mean` (the initial mean of `a`).
pub fn validate_state(state: &CompressibleState, reference_mean: f64) -> Result<ValidationReport> {
    let min_density = state.min_density()?;
    let (max_div_b, max_grad_b) = divergence_stats(&state.b)?;
    let relative_div_b = if max_grad_b > 0.0 {
        max_div_b / max_grad_b
    } else {
        max_div_b
    };
    let mean_a = state.a.mean();
    let mean_drift = (mean_a - reference_mean).abs();
    Ok(ValidationReport {
        min_density,
        max_div_b,
        relative_div_b,
        mean_a,
        mean_drift,
        density_ok: min_density > 0.0,
        div_b_ok: relative_div_b <= DIV_TOLERANCE,
        mean_ok: mean_drift <= MEAN_TOLERANCE,
    })
}

pub(crate) fn require_density(state: &CompressibleState) -> Result<Vec<f64>> {
    let a = state.a.to_samples()?;
    let min = a.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(1.0 + min > 0.0) {
        return Err(Error::SingularDensity {
            min_density: 1.0 + min,
        });
    }
    Ok(a)
}
