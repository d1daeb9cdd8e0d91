use serde::{Deserialize, Serialize};

use super::functionals::FunctionalSeries;
use crate::error::{Error, Result};

/// Drift of `‖U‖² + ‖B‖² + 2μ∫‖∇U‖² + 2ν∫‖∇B‖²` from its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub initial: f64,
    pub max_drift: f64,
    /// `true` when `max_drift` is relative to `initial`; absolute for zero data.
    pub relative: bool,
}

/// Energy balance over a recorded series.
pub fn energy_balance(series: &FunctionalSeries) -> Result<EnergyReport> {
    let first = series.samples.first().ok_or(Error::EmptyTrajectory)?;
    let total =
        |s: &super::functionals::FunctionalSample| 2.0 * (s.e_kin + s.e_mag) + s.diss_u + s.diss_b;
    let initial = total(first);
    let relative = initial > 0.0;
    let max_drift = series
        .samples
        .iter()
        .map(|s| {
            let d = (total(s) - initial).abs();
            if relative {
                d / initial
            } else {
                d
            }
        })
        .fold(0.0, f64::max);
    Ok(EnergyReport {
        initial,
        max_drift,
        relative,
    })
}
