//! Configuration, initial data, checkpoints, coupled runs, κ-sweeps and the
//! property suite behind the command-line tool.

mod checkpoint;
mod config;
mod initial;
mod run;
mod suite;
mod sweep;

pub use checkpoint::{
    checkpoint_read, checkpoint_write, pair_checkpoint, states_from_checkpoint, Checkpoint, MAGIC,
};
pub use config::{
    load_config, load_sweep_config, parse_config, parse_sweep_config, DensityScaling,
    InitialDataConfig, OutputFormat, OutputsConfig, RunConfig, SweepConfig, FAMILIES,
};
pub use initial::{initial_data_for, make_initial_data, random_bandlimited_scalar, RANDOM_KMAX};
pub use run::{
    resume_run, run_simulation, run_single, BlowUpRecord, ConstraintReport, InitialNorms,
    LyapunovSummary, ResumeState, RunOutcome, RunReport, Simulation, StepStats,
};
pub use suite::{
    direct_overlap, lemma_study, projector_defects, random_vector_field, reconstruction_residual,
    run_property_suite, LemmaStudy, PropertyCheck, PropertyReport, SuiteOptions,
};
pub use sweep::{
    fit_loglog_slope, run_sweep, sweep_threads, threads_from_env, SweepMember, SweepReport,
    THREADS_ENV,
};
