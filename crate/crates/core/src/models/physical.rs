//! Physical-space helpers for pointwise products.

use crate::error::Result;
use crate::spectral::{dealias, gradient, GridSpec, SpectralField, VectorField};

pub(crate) type Samples = Vec<f64>;
pub(crate) type Vec2 = [Samples; 2];
/// `jac[i][j] = ∂_j v_i`.
pub(crate) type Jacobian = [[Samples; 2]; 2];

pub(crate) fn vec_samples(v: &VectorField) -> Result<Vec2> {
    Ok([v.component(0).to_samples()?, v.component(1).to_samples()?])
}

pub(crate) fn jacobian(v: &VectorField) -> Result<Jacobian> {
    let g0 = gradient(v.component(0)).to_samples()?;
    let g1 = gradient(v.component(1)).to_samples()?;
    let mut it0 = g0.into_iter();
    let mut it1 = g1.into_iter();
    Ok([
        [it0.next().unwrap(), it0.next().unwrap()],
        [it1.next().unwrap(), it1.next().unwrap()],
    ])
}

pub(crate) fn grad_samples(f: &SpectralField) -> Result<Vec2> {
    let mut it = gradient(f).to_samples()?.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap()])
}

/// Forward transform followed by dealiasing.
pub(crate) fn to_field(grid: &GridSpec, s: &[f64]) -> Result<SpectralField> {
    Ok(dealias(&SpectralField::from_samples(grid, s)?))
}

pub(crate) fn to_vec_field(grid: &GridSpec, s: &Vec2) -> Result<VectorField> {
    VectorField::from_components(vec![to_field(grid, &s[0])?, to_field(grid, &s[1])?])
}

/// `(w·∇) z` from `w` and the Jacobian of `z`.
pub(crate) fn advect(w: &Vec2, jz: &Jacobian) -> Vec2 {
    let len = w[0].len();
    let mut out = [vec![0.0; len], vec![0.0; len]];
    for (i, o) in out.iter_mut().enumerate() {
        for (p, x) in o.iter_mut().enumerate() {
            *x = w[0][p] * jz[i][0][p] + w[1][p] * jz[i][1][p];
        }
    }
    out
}

/// `½∇|z|²` computed as `(∇z)ᵀ z`.
pub(crate) fn half_grad_sq(z: &Vec2, jz: &Jacobian) -> Vec2 {
    let len = z[0].len();
    let mut out = [vec![0.0; len], vec![0.0; len]];
    for (i, o) in out.iter_mut().enumerate() {
        for (p, x) in o.iter_mut().enumerate() {
            *x = z[0][p] * jz[0][i][p] + z[1][p] * jz[1][i][p];
        }
    }
    out
}

pub(crate) fn add(a: &Vec2, b: &Vec2) -> Vec2 {
    [
        a[0].iter().zip(&b[0]).map(|(x, y)| x + y).collect(),
        a[1].iter().zip(&b[1]).map(|(x, y)| x + y).collect(),
    ]
}

pub(crate) fn add_jac(a: &Jacobian, b: &Jacobian) -> Jacobian {
    let s = |x: &Samples, y: &Samples| -> Samples { x.iter().zip(y).map(|(p, q)| p + q).collect() };
    [
        [s(&a[0][0], &b[0][0]), s(&a[0][1], &b[0][1])],
        [s(&a[1][0], &b[1][0]), s(&a[1][1], &b[1][1])],
    ]
}

/// `f · v` pointwise.
pub(crate) fn scale_by(f: &[f64], v: &Vec2) -> Vec2 {
    [
        v[0].iter().zip(f).map(|(x, s)| x * s).collect(),
        v[1].iter().zip(f).map(|(x, s)| x * s).collect(),
    ]
}

/// Accumulates `s · v` into `acc`.
pub(crate) fn axpy_into(acc: &mut Vec2, s: f64, v: &Vec2) {
    for i in 0..2 {
        for (a, x) in acc[i].iter_mut().zip(&v[i]) {
            *a += s * x;
        }
    }
}

pub(crate) fn zeros(len: usize) -> Vec2 {
    [vec![0.0; len], vec![0.0; len]]
}
