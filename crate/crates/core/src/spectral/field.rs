use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Imaginary residue tolerated (relative to the field's magnitude) before an
/// inverse transform is declared non-Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-10;

struct Plan {
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

// Plans are immutable once built; the map only memoizes them per size.
fn plan(n: usize) -> Arc<Plan> {
    static PLANS: OnceLock<Mutex<HashMap<usize, Arc<Plan>>>> = OnceLock::new();
    let plans = PLANS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = plans.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(n)
        .or_insert_with(|| {
            let mut planner = FftPlanner::new();
            Arc::new(Plan {
                forward: planner.plan_fft_forward(n),
                inverse: planner.plan_fft_inverse(n),
            })
        })
        .clone()
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const BLOCK: usize = 16;
    for ib in (0..n).step_by(BLOCK) {
        for jb in (0..n).step_by(BLOCK) {
            for i in ib..(ib + BLOCK).min(n) {
                for j in jb..(jb + BLOCK).min(n) {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
    }
}

fn fft2(buf: &mut Vec<Complex64>, n: usize, inverse: bool) {
    let p = plan(n);
    let fft = if inverse { &p.inverse } else { &p.forward };
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // rows (axis 1 is contiguous), then columns through a transpose
    fft.process_with_scratch(buf, &mut scratch);
    let mut t = vec![Complex64::new(0.0, 0.0); buf.len()];
    transpose(buf, &mut t, n);
    fft.process_with_scratch(&mut t, &mut scratch);
    transpose(&t, buf, n);
}

/// Fourier coefficients of a real scalar field on the 2-torus.
///
/// Coefficients are stored in FFT order, row-major with axis 0 (x) as the
/// slow index: entry `i0 * n + i1` holds wavevector
/// `(grid.wavenumber(i0), grid.wavenumber(i1))`. The forward transform
/// divides by `n^d`, so the zero mode is the spatial mean.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &GridSpec) -> Self {
        SpectralField {
            grid: *grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn from_coeffs(grid: &GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        grid.require_2d()?;
        if coeffs.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: *grid,
            coeffs,
        })
    }

    /// Forward transform of physical samples (row-major, axis 0 slow).
    pub fn from_samples(grid: &GridSpec, samples: &[f64]) -> Result<Self> {
        grid.validate()?;
        grid.require_2d()?;
        if samples.len() != grid.len() {
            return Err(Error::SizeMismatch {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let n = grid.n;
        let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft2(&mut buf, n, false);
        let scale = 1.0 / grid.len() as f64;
        for c in buf.iter_mut() {
            *c *= scale;
        }
        // exact symmetry: average each coefficient with the conjugate of its mirror
        let mut out = buf.clone();
        for i0 in 0..n {
            let m0 = (n - i0) % n;
            for i1 in 0..n {
                let m1 = (n - i1) % n;
                let a = buf[i0 * n + i1];
                let b = buf[m0 * n + m1].conj();
                out[i0 * n + i1] = 0.5 * (a + b);
            }
        }
        Ok(SpectralField {
            grid: *grid,
            coeffs: out,
        })
    }

    /// Inverse transform to real physical samples.
    ///
    /// Imaginary residue up to `HERMITIAN_TOLERANCE` (relative) is dropped;
    /// anything larger means the coefficients do not describe a real field.
    pub fn to_samples(&self) -> Result<Vec<f64>> {
        let mut buf = self.coeffs.clone();
        fft2(&mut buf, self.grid.n, true);
        let mut max_re: f64 = 0.0;
        let mut max_im: f64 = 0.0;
        for c in &buf {
            max_re = max_re.max(c.re.abs());
            max_im = max_im.max(c.im.abs());
        }
        if max_im > HERMITIAN_TOLERANCE * max_re.max(1.0) {
            return Err(Error::NonHermitian { residue: max_im });
        }
        Ok(buf.into_iter().map(|c| c.re).collect())
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at integer wavevector `(k0, k1)`.
    pub fn mode(&self, k0: i64, k1: i64) -> Complex64 {
        let n = self.grid.n;
        self.coeffs[self.grid.index_of(k0) * n + self.grid.index_of(k1)]
    }

    /// Sets the coefficient at `(k0, k1)` and its Hermitian mirror.
    pub fn set_mode(&mut self, k0: i64, k1: i64, value: Complex64) {
        let n = self.grid.n;
        let i = self.grid.index_of(k0) * n + self.grid.index_of(k1);
        let m = self.grid.index_of(-k0) * n + self.grid.index_of(-k1);
        if i == m {
            self.coeffs[i] = Complex64::new(value.re, 0.0);
        } else {
            self.coeffs[i] = value;
            self.coeffs[m] = value.conj();
        }
    }

    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    pub fn set_mean(&mut self, mean: f64) {
        self.coeffs[0] = Complex64::new(mean, 0.0);
    }

    pub fn without_mean(&self) -> Self {
        let mut f = self.clone();
        f.coeffs[0] = Complex64::new(0.0, 0.0);
        f
    }

    /// Largest violation of `coeff(-k) = conj(coeff(k))`.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.grid.n;
        let mut worst: f64 = 0.0;
        for i0 in 0..n {
            for i1 in 0..n {
                let m = ((n - i0) % n) * n + (n - i1) % n;
                worst = worst.max((self.coeffs[i0 * n + i1] - self.coeffs[m].conj()).norm());
            }
        }
        worst
    }

    /// Spatial L² norm via Parseval: `‖f‖² = L^d Σ|c_k|²`.
    pub fn l2_norm(&self) -> f64 {
        (self.grid.volume() * self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>()).sqrt()
    }

    /// Largest coefficient magnitude.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c * s)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
        }
    }

    /// Applies a per-mode multiplier `m(index, k0, k1)`.
    pub fn apply_multiplier(&self, m: impl Fn(usize, i64, i64) -> Complex64) -> Self {
        let n = self.grid.n;
        let mut out = self.clone();
        for i0 in 0..n {
            let k0 = self.grid.wavenumber(i0);
            for i1 in 0..n {
                let k1 = self.grid.wavenumber(i1);
                let idx = i0 * n + i1;
                out.coeffs[idx] = self.coeffs[idx] * m(idx, k0, k1);
            }
        }
        out
    }

    pub fn check_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    /// `self + s * other`.
    pub fn axpy(&self, s: f64, other: &SpectralField) -> Self {
        debug_assert!(self.grid.same_as(&other.grid));
        SpectralField {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b * s)
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.axpy(-1.0, rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.scale(rhs)
    }
}

/// `d` scalar fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<SpectralField>,
}

impl VectorField {
    pub fn zeros(grid: &GridSpec) -> Self {
        VectorField {
            components: (0..grid.d).map(|_| SpectralField::zeros(grid)).collect(),
        }
    }

    pub fn from_components(components: Vec<SpectralField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidGrid("vector field needs components".into()))?;
        if components.len() != first.grid().d {
            return Err(Error::InvalidGrid(format!(
                "{} components for d={}",
                components.len(),
                first.grid().d
            )));
        }
        if components.iter().any(|c| !c.grid().same_as(first.grid())) {
            return Err(Error::GridMismatch);
        }
        Ok(VectorField { components })
    }

    pub fn from_samples(grid: &GridSpec, samples: &[Vec<f64>]) -> Result<Self> {
        let comps = samples
            .iter()
            .map(|s| SpectralField::from_samples(grid, s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_components(comps)
    }

    pub fn to_samples(&self) -> Result<Vec<Vec<f64>>> {
        self.components.iter().map(|c| c.to_samples()).collect()
    }

    pub fn grid(&self) -> &GridSpec {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &SpectralField {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut SpectralField {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[SpectralField] {
        &self.components
    }

    pub fn into_components(self) -> Vec<SpectralField> {
        self.components
    }

    pub fn l2_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.l2_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn map(&self, f: impl Fn(&SpectralField) -> SpectralField) -> Self {
        VectorField {
            components: self.components.iter().map(f).collect(),
        }
    }

    pub fn axpy(&self, s: f64, other: &VectorField) -> Self {
        VectorField {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.axpy(s, b))
                .collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &VectorField) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }

    pub fn max_coeff(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.max_coeff())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|c| c.is_finite())
    }
}

impl Add for &VectorField {
    type Output = VectorField;
    fn add(self, rhs: &VectorField) -> VectorField {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &VectorField {
    type Output = VectorField;
    fn sub(self, rhs: &VectorField) -> VectorField {
        self.axpy(-1.0, rhs)
    }
}

/// Forward transform; the zero mode of the result is the spatial mean.
pub fn transform_forward(samples: &[f64], grid: &GridSpec) -> Result<SpectralField> {
    SpectralField::from_samples(grid, samples)
}

pub fn transform_inverse(f: &SpectralField) -> Result<Vec<f64>> {
    f.to_samples()
}

/// Physical coordinates `(x, y)` of sample `i0 * n + i1`.
pub fn coordinates(grid: &GridSpec) -> Vec<(f64, f64)> {
    let h = grid.spacing();
    let n = grid.n;
    (0..n * n)
        .map(|idx| ((idx / n) as f64 * h, (idx % n) as f64 * h))
        .collect()
}

/// Samples a function of `(x, y)` on the grid.
pub fn sample_fn(grid: &GridSpec, f: impl Fn(f64, f64) -> f64) -> Vec<f64> {
    coordinates(grid)
        .into_iter()
        .map(|(x, y)| f(x, y))
        .collect()
}
