use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Running `L∞` and `L¹` norms in time of a scalar time series.
///
/// The `L¹` part uses the trapezoid rule on the recorded samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct NormAccumulator {
    pub linf: f64,
    pub l1: f64,
    pub last: Option<(f64, f64)>,
    pub samples: usize,
}

impl NormAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if !value.is_finite() || !t.is_finite() {
            return Err(Error::BlowUp {
                time: t,
                reason: format!("non-finite functional value {value}"),
            });
        }
        let v = value.abs();
        if let Some((t0, v0)) = self.last {
            if t < t0 {
                return Err(Error::TimeRegression { t, last: t0 });
            }
            self.l1 += 0.5 * (t - t0) * (v0 + v);
        }
        self.linf = self.linf.max(v);
        self.last = Some((t, v));
        self.samples += 1;
        Ok(())
    }

    pub fn last_time(&self) -> Option<f64> {
        self.last.map(|(t, _)| t)
    }
}

/// Functional form of [`NormAccumulator::push`].
pub fn accumulate(acc: &NormAccumulator, t: f64, value: f64) -> Result<NormAccumulator> {
    let mut next = acc.clone();
    next.push(t, value)?;
    Ok(next)
}
