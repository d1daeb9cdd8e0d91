//! Functionals of the coupled run: the deviation and limit quantities, the
//! bound `M`, the large-κ budget, energy balance and block Lyapunov ratios.

mod budget;
mod energy;
mod functionals;
mod lyapunov;

pub use budget::{
    budget_from_norms, compute_budget, compute_m, compute_m_2d_bound, m_2d_bound_from_norms,
    BudgetOptions, MEstimate, TheoremBudget, DEFAULT_C_UNIVERSAL, DEFAULT_KAPPA_THRESHOLD,
    SATURATION_TOLERANCE,
};
pub use energy::{energy_balance, EnergyReport};
pub use functionals::{
    compute_xd, compute_yd, compute_zd, deviation_norms, deviation_terms, initial_data_norms,
    initial_xd, limit_data_norm, limit_terms, FunctionalSample, FunctionalSeries,
    FunctionalTracker, InstantTerms, LimitTerms, TrackerState, CSV_COLUMNS, TIME_MATCH_TOLERANCE,
};
pub use lyapunov::{
    lyapunov_blocks, ratio_range, LyapunovBlock, LYAPUNOV_RATIO_MAX, LYAPUNOV_RATIO_MIN,
};
