use serde::{Deserialize, Serialize};

use super::profile::DyadicProfile;
use crate::error::{Error, Result};
use crate::spectral::{SpectralField, VectorField};

/// Summation exponent `r` of `Ḃ^s_{p,r}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SumExponent {
    One,
    Two,
    Infinity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesovIndex {
    pub s: f64,
    pub p: f64,
    pub r: SumExponent,
}

impl BesovIndex {
    pub fn new(s: f64, p: f64, r: SumExponent) -> Result<Self> {
        if p != 2.0 {
            return Err(Error::InvalidBesovIndex(format!(
                "only p = 2 is supported, got p = {p}"
            )));
        }
        if !s.is_finite() {
            return Err(Error::InvalidBesovIndex(format!("s = {s} is not finite")));
        }
        Ok(BesovIndex { s, p, r })
    }

    /// `Ḃ^s_{2,1}`, the index used throughout the diagnostics.
    pub fn b21(s: f64) -> Self {
        BesovIndex {
            s,
            p: 2.0,
            r: SumExponent::One,
        }
    }
}

/// `‖(2^{js} b_j)_j‖_{ℓ^r}` from squared block norms `b_j²` starting at `j_min`.
pub fn besov_from_blocks(sq_norms: &[f64], j_min: i32, idx: BesovIndex) -> f64 {
    let terms = sq_norms
        .iter()
        .enumerate()
        .map(|(i, &e)| 2f64.powf((j_min + i as i32) as f64 * idx.s) * e.sqrt());
    match idx.r {
        SumExponent::One => terms.sum(),
        SumExponent::Two => terms.map(|t| t * t).sum::<f64>().sqrt(),
        SumExponent::Infinity => terms.fold(0.0, f64::max),
    }
}

/// Homogeneous Besov norm `‖f‖_{Ḃ^s_{2,r}}` with block norms from Parseval.
pub fn besov_norm(profile: &DyadicProfile, f: &SpectralField, idx: BesovIndex) -> Result<f64> {
    if idx.p != 2.0 {
        return Err(Error::InvalidBesovIndex(format!("p = {}", idx.p)));
    }
    Ok(besov_from_blocks(
        &profile.block_sq_norms(f),
        profile.j_min(),
        idx,
    ))
}

/// Vector-field norm: per-block Euclidean norm across components, then `ℓ^r`.
pub fn besov_norm_vec(profile: &DyadicProfile, v: &VectorField, idx: BesovIndex) -> Result<f64> {
    if idx.p != 2.0 {
        return Err(Error::InvalidBesovIndex(format!("p = {}", idx.p)));
    }
    Ok(besov_from_blocks(
        &profile.block_sq_norms_vec(v),
        profile.j_min(),
        idx,
    ))
}

/// `‖f‖_{Ḃ^s_{2,1}}` for a scalar field.
pub fn b21(profile: &DyadicProfile, f: &SpectralField, s: f64) -> f64 {
    besov_from_blocks(
        &profile.block_sq_norms(f),
        profile.j_min(),
        BesovIndex::b21(s),
    )
}

/// `‖v‖_{Ḃ^s_{2,1}}` for a vector field.
pub fn b21_vec(profile: &DyadicProfile, v: &VectorField, s: f64) -> f64 {
    besov_from_blocks(
        &profile.block_sq_norms_vec(v),
        profile.j_min(),
        BesovIndex::b21(s),
    )
}
