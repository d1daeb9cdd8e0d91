//! Empirical ratios for the product, interpolation and composition
//! estimates in `Ḃ^s_{2,1}`. Each returns the left side of the inequality
//! divided by the right side without its constant, so the suite maximum over
//! many inputs is the observed constant.

use super::besov::b21;
use super::profile::DyadicProfile;
use crate::error::{Error, Result};
use crate::spectral::{dealias, product, SpectralField};

/// `‖fg‖_{Ḃ^{s1+s2−d/2}_{2,1}} / (‖f‖_{Ḃ^{s1}_{2,1}} ‖g‖_{Ḃ^{s2}_{2,1}})`.
pub fn check_product(
    profile: &DyadicProfile,
    f: &SpectralField,
    g: &SpectralField,
    s1: f64,
    s2: f64,
) -> Result<f64> {
    let half_d = profile.grid().d as f64 / 2.0;
    if s1 > half_d || s2 > half_d {
        return Err(Error::param(
            "s1/s2",
            format!("must not exceed d/2 = {half_d}"),
        ));
    }
    if s1 + s2 <= 0.0 {
        return Err(Error::param("s1+s2", "must be positive"));
    }
    let denom = b21(profile, f, s1) * b21(profile, g, s2);
    if denom == 0.0 {
        return Err(Error::UndefinedRatio(
            "product check: zero denominator".into(),
        ));
    }
    let fg = product(f, g)?;
    Ok(b21(profile, &fg, s1 + s2 - half_d) / denom)
}

/// `‖f‖_{Ḃ^{θs1+(1−θ)s2}_{2,1}} / (‖f‖^θ_{Ḃ^{s1}_{2,1}} ‖f‖^{1−θ}_{Ḃ^{s2}_{2,1}})`.
pub fn check_interpolation(
    profile: &DyadicProfile,
    f: &SpectralField,
    s1: f64,
    s2: f64,
    theta: f64,
) -> Result<f64> {
    if s1 == s2 {
        return Err(Error::param("s1", "must differ from s2"));
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::param("theta", "must lie in (0, 1)"));
    }
    let n1 = b21(profile, f, s1);
    let n2 = b21(profile, f, s2);
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::UndefinedRatio(
            "interpolation check: zero norm".into(),
        ));
    }
    let mid = b21(profile, f, theta * s1 + (1.0 - theta) * s2);
    Ok(mid / (n1.powf(theta) * n2.powf(1.0 - theta)))
}

/// `F(a) = (1+a)^{γ−1} − 1`, the pressure deviation `P′(1+a) − 1` for
/// `P(ρ) = ρ^γ/γ`, applied pointwise and dealiased.
pub fn compose_pressure_deviation(f: &SpectralField, gamma: f64) -> Result<SpectralField> {
    let s = f.to_samples()?;
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if min <= -1.0 {
        return Err(Error::SingularDensity {
            min_density: 1.0 + min,
        });
    }
    let out: Vec<f64> = s
        .iter()
        .map(|&a| (1.0 + a).powf(gamma - 1.0) - 1.0)
        .collect();
    Ok(dealias(&SpectralField::from_samples(f.grid(), &out)?))
}

/// `‖F(f)‖_{Ḃ^s_{2,1}} / ‖f‖_{Ḃ^s_{2,1}}` with `F(f) = (1+f)^{γ−1} − 1`.
/// Defined as 0 when `f` has zero norm (`F(0) = 0`).
pub fn check_composition(
    profile: &DyadicProfile,
    f: &SpectralField,
    s: f64,
    gamma: f64,
) -> Result<f64> {
    let composed = compose_pressure_deviation(f, gamma)?;
    let denom = b21(profile, f, s);
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(b21(profile, &composed, s) / denom)
}
