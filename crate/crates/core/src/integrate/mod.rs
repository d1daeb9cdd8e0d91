//! Exact linear propagators and the exponential Runge-Kutta stepper for both
//! systems, adaptive step selection and time-norm accumulators.

mod accumulator;
mod propagator;
mod stepper;

pub use accumulator::{accumulate, NormAccumulator};
pub use propagator::{
    acoustic_exp, acoustic_function, acoustic_generator, identity2, linear_propagator, mat_mul,
    mat_vec, phi_fn, LinearCoefficients, LinearPropagator, Mat2, ModePropagator, PropagatorKind,
};
pub use stepper::{
    adaptive_dt, apply_linear_compressible, cfl_bound, etd2rk, propagate_compressible,
    propagate_compressible_as, propagate_incompressible, propagate_incompressible_as,
    stabilization_factor, step_compressible, step_compressible_cached, step_compressible_with,
    step_incompressible, step_incompressible_cached, step_incompressible_with, CompressibleSplit,
    IncompressibleSplit, PropagatorCache, SplitSystem, StepperConfig, MIN_DT,
};
