use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Viscosities, resistivity and the adiabatic exponent.
///
/// `kappa = lambda + 2 mu` is the volume viscosity multiplying `∇div u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysParams {
    pub mu: f64,
    pub lambda: f64,
    pub nu: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
}

fn default_gamma() -> f64 {
    1.4
}

impl PhysParams {
    pub fn new(mu: f64, lambda: f64, nu: f64, gamma: f64) -> Result<Self> {
        let p = PhysParams {
            mu,
            lambda,
            nu,
            gamma,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters for a target volume viscosity `kappa` (sets `lambda = kappa − 2mu`).
    pub fn with_kappa(mu: f64, kappa: f64, nu: f64, gamma: f64) -> Result<Self> {
        Self::new(mu, kappa - 2.0 * mu, nu, gamma)
    }

    pub fn kappa(&self) -> f64 {
        self.lambda + 2.0 * self.mu
    }

    pub fn set_kappa(&mut self, kappa: f64) {
        self.lambda = kappa - 2.0 * self.mu;
    }

    pub fn pressure(&self) -> PressureLaw {
        PressureLaw { gamma: self.gamma }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::param(
                "mu",
                format!("strong parabolicity requires mu > 0, got {}", self.mu),
            ));
        }
        if !(self.kappa() > 0.0 && self.kappa().is_finite()) {
            return Err(Error::param(
                "lambda",
                format!(
                    "strong parabolicity requires kappa = lambda + 2 mu > 0, got {}",
                    self.kappa()
                ),
            ));
        }
        if !(self.nu > 0.0 && self.nu.is_finite()) {
            return Err(Error::param(
                "nu",
                format!("resistivity must be positive, got {}", self.nu),
            ));
        }
        if !(self.gamma > 1.0 && self.gamma.is_finite()) {
            return Err(Error::param(
                "gamma",
                format!("adiabatic exponent must exceed 1, got {}", self.gamma),
            ));
        }
        Ok(())
    }
}

/// Barotropic law `P(ρ) = ρ^γ/γ`, normalized so that `P′(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PressureLaw {
    pub gamma: f64,
}

impl PressureLaw {
    pub fn pressure(&self, rho: f64) -> f64 {
        rho.powf(self.gamma) / self.gamma
    }

    pub fn derivative(&self, rho: f64) -> f64 {
        rho.powf(self.gamma - 1.0)
    }

    /// `k(a) = P′(1+a) − 1`.
    pub fn k(&self, a: f64) -> f64 {
        self.derivative(1.0 + a) - 1.0
    }

    pub fn sound_speed(&self, rho: f64) -> f64 {
        self.derivative(rho).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_parabolicity_is_enforced() {
        let e = PhysParams::new(-1.0, 0.0, 1.0, 1.4).unwrap_err();
        assert!(e.to_string().contains("strong parabolicity"));
        assert!(PhysParams::new(1.0, -2.5, 1.0, 1.4).is_err());
        assert!(PhysParams::new(1.0, 0.0, 0.0, 1.4).is_err());
        assert!(PhysParams::new(1.0, 0.0, 1.0, 1.0).is_err());
        let p = PhysParams::with_kappa(0.5, 100.0, 0.5, 1.4).unwrap();
        assert_eq!(p.kappa(), 100.0);
    }

    #[test]
    fn pressure_law_normalization() {
        let law = PressureLaw { gamma: 1.4 };
        assert!((law.derivative(1.0) - 1.0).abs() < 1e-15);
        assert_eq!(law.k(0.0), 0.0);
        assert!((law.k(0.1) - (1.1f64.powf(0.4) - 1.0)).abs() < 1e-15);
        assert!((law.k(0.1) - 0.0388).abs() < 1e-4);
        let mut prev = law.pressure(0.1);
        for i in 2..50 {
            let p = law.pressure(0.1 * i as f64);
            assert!(p > prev);
            prev = p;
        }
    }
}
