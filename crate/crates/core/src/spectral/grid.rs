use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Uniform periodic grid on the torus `[0, L)^d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "default_dimension")]
    pub d: usize,
    pub n: usize,
    #[serde(default = "default_period", alias = "L")]
    pub period: f64,
    #[serde(default = "default_dealias_fraction")]
    pub dealias_fraction: f64,
}

fn default_dimension() -> usize {
    2
}

fn default_period() -> f64 {
    2.0 * PI
}

fn default_dealias_fraction() -> f64 {
    2.0 / 3.0
}

impl GridSpec {
    /// Two-dimensional grid with the default 2/3 dealiasing fraction.
    pub fn new(n: usize, period: f64) -> Result<Self> {
        let g = GridSpec {
            d: 2,
            n,
            period,
            dealias_fraction: default_dealias_fraction(),
        };
        g.validate()?;
        Ok(g)
    }

    pub fn with_dealias_fraction(mut self, fraction: f64) -> Result<Self> {
        self.dealias_fraction = fraction;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.d == 0 {
            return Err(Error::InvalidGrid("d must be positive".into()));
        }
        if self.n < 8 || !self.n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n={} must be a power of two and at least 8",
                self.n
            )));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "period={} must be positive",
                self.period
            )));
        }
        if !(self.dealias_fraction > 0.0 && self.dealias_fraction <= 1.0) {
            return Err(Error::InvalidGrid(format!(
                "dealias_fraction={} must lie in (0, 1]",
                self.dealias_fraction
            )));
        }
        Ok(())
    }

    /// Rejects every dimension the solvers do not implement.
    pub fn require_2d(&self) -> Result<()> {
        if self.d != 2 {
            return Err(Error::UnsupportedDimension(self.d));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.period / self.n as f64
    }

    /// Volume of the torus, `L^d`.
    pub fn volume(&self) -> f64 {
        self.period.powi(self.d as i32)
    }

    /// `2π/L`, the physical wavenumber of integer mode 1.
    pub fn base_wavenumber(&self) -> f64 {
        2.0 * PI / self.period
    }

    /// Integer wavenumber for FFT index `i`, in `(-n/2, n/2]`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> i64 {
        let n = self.n as i64;
        let i = i as i64;
        if i <= n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT index holding integer wavenumber `k` (taken modulo n).
    #[inline]
    pub fn index_of(&self, k: i64) -> usize {
        k.rem_euclid(self.n as i64) as usize
    }

    #[inline]
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Largest retained integer wavenumber magnitude per axis.
    pub fn dealias_cutoff(&self) -> f64 {
        self.dealias_fraction * self.n as f64 / 2.0
    }

    /// Smallest nonzero physical wavenumber magnitude on the grid.
    pub fn min_wavenumber(&self) -> f64 {
        self.base_wavenumber()
    }

    /// Largest physical wavenumber magnitude on the grid (corner Nyquist mode).
    pub fn max_wavenumber(&self) -> f64 {
        self.base_wavenumber() * (self.n as f64 / 2.0) * (self.d as f64).sqrt()
    }

    pub fn same_as(&self, other: &GridSpec) -> bool {
        self == other
    }
}
