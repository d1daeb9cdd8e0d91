use serde::{Deserialize, Serialize};

use super::functionals::{initial_data_norms, FunctionalSeries};
use crate::error::{Error, Result};
use crate::lp::{b21_vec, DyadicProfile};
use crate::models::{CompressibleState, IncompressibleState, PhysParams};

/// Default of the unknown universal constant.
pub const DEFAULT_C_UNIVERSAL: f64 = 1.0;
/// Default bound on `κ⁻¹ D₀`.
pub const DEFAULT_KAPPA_THRESHOLD: f64 = 0.01;
/// `M` counts as saturated when `Z_d` grew by less than this fraction over
/// the last tenth of the horizon.
pub const SATURATION_TOLERANCE: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetOptions {
    #[serde(default = "default_c")]
    pub c_universal: f64,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

fn default_c() -> f64 {
    DEFAULT_C_UNIVERSAL
}

fn default_threshold() -> f64 {
    DEFAULT_KAPPA_THRESHOLD
}

impl Default for BudgetOptions {
    fn default() -> Self {
        BudgetOptions {
            c_universal: DEFAULT_C_UNIVERSAL,
            threshold: DEFAULT_KAPPA_THRESHOLD,
        }
    }
}

impl BudgetOptions {
    pub fn validate(&self) -> Result<()> {
        if !(self.c_universal > 0.0 && self.c_universal.is_finite()) {
            return Err(Error::param(
                "budget.c_universal",
                "must be positive and finite",
            ));
        }
        if !(self.threshold > 0.0 && self.threshold.is_finite()) {
            return Err(Error::param(
                "budget.threshold",
                "must be positive and finite",
            ));
        }
        Ok(())
    }
}

/// Quantities of the large-κ smallness condition, with both predicates.
///
/// Non-finite entries are reported as `null` in JSON; they arise when the
/// exponential factors overflow and make both checks fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremBudget {
    pub m: f64,
    pub d0: f64,
    pub delta0: f64,
    pub kappa: f64,
    pub c_universal: f64,
    pub threshold: f64,
    /// `κ⁻¹ D₀`.
    pub kappa_ratio: f64,
    /// `δ₀ (1/μ + 1/ν + 1)`.
    pub delta_product: f64,
    pub kappa_check: bool,
    pub delta_check: bool,
}

impl TheoremBudget {
    pub fn passed(&self) -> bool {
        self.kappa_check && self.delta_check
    }
}

/// Evaluates the budget from the data norms:
///
/// ```text
/// D₀ = C e^{C(1+1/μ+1/ν)(M+1)²} (‖a₀,Qv₀‖_{Ḃ^{d/2−1}} + κ‖a₀‖_{Ḃ^{d/2}} + 1)
/// δ₀ = C e^{2C(1+1/μ²+1/ν²)(M+1)²} (D₀²/κ + D₀/√κ)
/// ```
///
/// with checks `D₀/κ ≤ threshold` and `δ₀(1/μ + 1/ν + 1) ≤ 1/2`.
#[allow(clippy::too_many_arguments)]
pub fn budget_from_norms(
    low_norm: f64,
    a0_high: f64,
    kappa: f64,
    mu: f64,
    nu: f64,
    m: f64,
    options: &BudgetOptions,
) -> TheoremBudget {
    let c = options.c_universal;
    let m1 = (m + 1.0).powi(2);
    let d0 = c * (c * (1.0 + 1.0 / mu + 1.0 / nu) * m1).exp() * (low_norm + kappa * a0_high + 1.0);
    let delta0 = c
        * (2.0 * c * (1.0 + mu.powi(-2) + nu.powi(-2)) * m1).exp()
        * (d0 * d0 / kappa + d0 / kappa.sqrt());
    let kappa_ratio = d0 / kappa;
    let delta_product = delta0 * (1.0 / mu + 1.0 / nu + 1.0);
    TheoremBudget {
        m,
        d0,
        delta0,
        kappa,
        c_universal: c,
        threshold: options.threshold,
        kappa_ratio,
        delta_product,
        kappa_check: kappa_ratio <= options.threshold,
        delta_check: delta_product <= 0.5,
    }
}

/// Budget for the data `(a₀, u₀, b₀)` against the limit data `(U₀, B₀)`.
pub fn compute_budget(
    profile: &DyadicProfile,
    comp0: &CompressibleState,
    inc0: &IncompressibleState,
    params: &PhysParams,
    m: f64,
    options: &BudgetOptions,
) -> Result<TheoremBudget> {
    let (low, high) = initial_data_norms(profile, comp0, inc0)?;
    Ok(budget_from_norms(
        low,
        high,
        params.kappa(),
        params.mu,
        params.nu,
        m,
        options,
    ))
}

/// Finite-horizon surrogate for `M = sup_T Z_d(T)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MEstimate {
    pub value: f64,
    /// Relative growth of `Z_d` over the last tenth of the horizon.
    pub last_tenth_increase: f64,
    pub saturated: bool,
}

/// `Z_d` at the final sample, with the saturation criterion.
pub fn compute_m(series: &FunctionalSeries) -> Result<MEstimate> {
    let last = series.last().ok_or(Error::EmptyTrajectory)?;
    let t0 = series.samples[0].t;
    let cut = last.t - 0.1 * (last.t - t0);
    let earlier = series
        .samples
        .iter()
        .rev()
        .find(|s| s.t <= cut)
        .unwrap_or(&series.samples[0]);
    let increase = if last.zd > 0.0 {
        (last.zd - earlier.zd) / last.zd
    } else {
        0.0
    };
    Ok(MEstimate {
        value: last.zd,
        last_tenth_increase: increase,
        saturated: increase < SATURATION_TOLERANCE,
    })
}

/// `C ‖U₀,B₀‖_{Ḃ⁰} exp(C(μ⁻⁴ + ν⁻⁴) ‖U₀,B₀‖⁴_{L²})`.
pub fn m_2d_bound_from_norms(besov: f64, l2: f64, mu: f64, nu: f64, c: f64) -> f64 {
    c * besov * (c * (mu.powi(-4) + nu.powi(-4)) * l2.powi(4)).exp()
}

/// Closed-form 2D bound on `M` from the limit data.
pub fn compute_m_2d_bound(
    profile: &DyadicProfile,
    inc0: &IncompressibleState,
    params: &PhysParams,
    c: f64,
) -> Result<f64> {
    let grid = inc0.grid();
    if grid.d != 2 {
        return Err(Error::UnsupportedDimension(grid.d));
    }
    let besov = b21_vec(profile, &inc0.u, 0.0) + b21_vec(profile, &inc0.b, 0.0);
    let l2 = inc0.u.l2_norm() + inc0.b.l2_norm();
    Ok(m_2d_bound_from_norms(besov, l2, params.mu, params.nu, c))
}
