use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

use super::checkpoint::{
    checkpoint_read, checkpoint_write, pair_checkpoint, states_from_checkpoint,
};
use super::config::{OutputFormat, RunConfig};
use super::initial::initial_data_for;
use crate::diagnostics::{
    budget_from_norms, compute_m, energy_balance, initial_data_norms, m_2d_bound_from_norms,
    EnergyReport, FunctionalSeries, FunctionalTracker, MEstimate, TheoremBudget, TrackerState,
    LYAPUNOV_RATIO_MAX, LYAPUNOV_RATIO_MIN,
};
use crate::error::{Error, Result};
use crate::integrate::{
    adaptive_dt, cfl_bound, step_compressible_cached, step_incompressible_cached, PropagatorCache,
};
use crate::lp::{b21_vec, DyadicProfile};
use crate::models::{CompressibleState, IncompressibleState, DIV_TOLERANCE, MEAN_TOLERANCE};

/// Data-only quantities needed by the final budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialNorms {
    /// `‖a₀, Qv₀‖` in the critical space.
    pub low: f64,
    /// `‖a₀‖` one derivative above.
    pub a_high: f64,
    /// `‖U₀, B₀‖` in the critical space.
    pub limit_besov: f64,
    /// `‖U₀‖_{L²} + ‖B₀‖_{L²}`.
    pub limit_l2: f64,
}

impl InitialNorms {
    pub fn of(
        profile: &DyadicProfile,
        comp: &CompressibleState,
        inc: &IncompressibleState,
    ) -> Result<Self> {
        let (low, a_high) = initial_data_norms(profile, comp, inc)?;
        Ok(InitialNorms {
            low,
            a_high,
            limit_besov: b21_vec(profile, &inc.u, 0.0) + b21_vec(profile, &inc.b, 0.0),
            limit_l2: inc.u.l2_norm() + inc.b.l2_norm(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StepStats {
    pub min_dt: Option<f64>,
    pub max_dt: Option<f64>,
    /// Steps whose size fell below `min(dt, CFL bound)` other than the
    /// final step onto `t_end`.
    pub reductions_below_cfl: usize,
}

/// Everything besides the two states that a resumed run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResumeState {
    pub steps: usize,
    pub t: f64,
    pub initial: InitialNorms,
    pub tracker: TrackerState,
    pub series: FunctionalSeries,
    pub stats: StepStats,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpRecord {
    pub time: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstraintReport {
    pub max_div_b: f64,
    pub max_relative_div_b: f64,
    pub max_mean_drift: f64,
    pub min_rho: f64,
    pub div_b_ok: bool,
    pub mean_ok: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LyapunovSummary {
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    /// Every recorded ratio lies in `[1/3, 3]`.
    pub within_bounds: bool,
}

/// Summary written as `report.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub steps: usize,
    pub final_time: f64,
    pub completed: bool,
    pub blow_up: Option<BlowUpRecord>,
    pub initial: InitialNorms,
    pub x_d_initial: f64,
    pub z_d_final: f64,
    pub m: MEstimate,
    pub m_2d_bound: f64,
    pub budget: TheoremBudget,
    pub energy: EnergyReport,
    pub constraints: ConstraintReport,
    pub lyapunov: LyapunovSummary,
    pub dev_u_sup: f64,
    pub dev_b_sup: f64,
    /// `sup_t κ max|a|`.
    pub kappa_max_a: f64,
    pub stats: StepStats,
}

/// Both systems advanced on one timeline with the functionals recorded.
pub struct Simulation {
    config: RunConfig,
    comp: CompressibleState,
    inc: IncompressibleState,
    tracker: FunctionalTracker,
    cache: PropagatorCache,
    resume: ResumeState,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        config.validate()?;
        let (comp, inc) = initial_data_for(config)?;
        Self::from_states(config, comp, inc)
    }

    /// Starts from explicit initial states (recorded as the `t = 0` sample).
    pub fn from_states(
        config: &RunConfig,
        comp: CompressibleState,
        inc: IncompressibleState,
    ) -> Result<Self> {
        let profile = DyadicProfile::new(&config.grid);
        let initial = InitialNorms::of(&profile, &comp, &inc)?;
        let mut sim = Simulation {
            config: config.clone(),
            tracker: FunctionalTracker::new(&config.grid, &config.params),
            cache: PropagatorCache::new(),
            resume: ResumeState {
                steps: 0,
                t: comp.t,
                initial,
                tracker: TrackerState::default(),
                series: FunctionalSeries::new(),
                stats: StepStats::default(),
            },
            comp,
            inc,
        };
        sim.record()?;
        Ok(sim)
    }

    /// Continues from a checkpoint and its JSON sidecar.
    pub fn resume(config: &RunConfig, checkpoint: impl AsRef<Path>) -> Result<Self> {
        config.validate()?;
        let path = checkpoint.as_ref();
        let ck = checkpoint_read(path)?;
        let (comp, inc) = states_from_checkpoint(&ck, &config.grid)?;
        let side: ResumeState =
            serde_json::from_str(&std::fs::read_to_string(path.with_extension("json"))?)?;
        Ok(Simulation {
            config: config.clone(),
            tracker: FunctionalTracker::resume(&config.grid, &config.params, side.tracker.clone()),
            cache: PropagatorCache::new(),
            resume: side,
            comp,
            inc,
        })
    }

    pub fn compressible(&self) -> &CompressibleState {
        &self.comp
    }

    pub fn incompressible(&self) -> &IncompressibleState {
        &self.inc
    }

    pub fn series(&self) -> &FunctionalSeries {
        &self.resume.series
    }

    pub fn steps(&self) -> usize {
        self.resume.steps
    }

    pub fn time(&self) -> f64 {
        self.comp.t
    }

    pub fn is_finished(&self) -> bool {
        let t_end = self.config.stepper.t_end;
        t_end - self.comp.t <= 1e-12 * t_end.max(1.0)
    }

    fn record(&mut self) -> Result<()> {
        let sample = self.tracker.record(&self.comp, &self.inc)?;
        self.resume.series.push(sample)?;
        self.resume.tracker = self.tracker.state().clone();
        Ok(())
    }

    /// Advances both systems by one shared step.
    pub fn step(&mut self) -> Result<()> {
        let p = self.config.params;
        let sc = self.config.stepper;
        let dt = adaptive_dt(&self.comp, Some(&self.inc), &p, &sc)?;
        let bound = sc
            .dt
            .min(cfl_bound(&self.comp, Some(&self.inc), &p, sc.cfl)?);
        let comp = step_compressible_cached(&mut self.cache, &self.comp, &p, dt)?;
        let mut inc = step_incompressible_cached(&mut self.cache, &self.inc, &p, dt)?;
        inc.t = comp.t;
        self.comp = comp;
        self.inc = inc;
        let st = &mut self.resume;
        st.steps += 1;
        st.t = self.comp.t;
        st.stats.min_dt = Some(st.stats.min_dt.map_or(dt, |m: f64| m.min(dt)));
        st.stats.max_dt = Some(st.stats.max_dt.map_or(dt, |m: f64| m.max(dt)));
        let last = self.is_finished();
        if dt < bound * (1.0 - 1e-12) && !last {
            self.resume.stats.reductions_below_cfl += 1;
        }
        if self.resume.steps % sc.norm_stride == 0 || last {
            self.record()?;
        }
        Ok(())
    }

    pub fn resume_state(&self) -> &ResumeState {
        &self.resume
    }

    /// Writes `checkpoint_<step>.bmhd` and its sidecar into `dir`.
    pub fn write_checkpoint(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(format!("checkpoint_{:06}.bmhd", self.resume.steps));
        checkpoint_write(&pair_checkpoint(&self.comp, &self.inc)?, &path)?;
        std::fs::write(
            path.with_extension("json"),
            serde_json::to_string_pretty(&self.resume)?,
        )?;
        Ok(path)
    }

    /// Final report from the recorded series.
    pub fn report(&self, blow_up: Option<BlowUpRecord>) -> Result<RunReport> {
        let cfg = &self.config;
        let st = self.tracker.state();
        let series = &self.resume.series;
        let m = compute_m(series)?;
        let init = self.resume.initial;
        let budget = budget_from_norms(
            init.low,
            init.a_high,
            cfg.params.kappa(),
            cfg.params.mu,
            cfg.params.nu,
            m.value,
            &cfg.budget,
        );
        let lyap_ok = match (st.lyapunov_min, st.lyapunov_max) {
            (Some(lo), Some(hi)) => lo >= 1.0 / 3.0 && hi <= 3.0,
            _ => true,
        };
        debug_assert!(LYAPUNOV_RATIO_MIN > 1.0 / 3.0 && LYAPUNOV_RATIO_MAX <= 3.0);
        Ok(RunReport {
            config: cfg.clone(),
            steps: self.resume.steps,
            final_time: self.comp.t,
            completed: blow_up.is_none() && self.is_finished(),
            blow_up,
            initial: init,
            x_d_initial: series.samples[0].xd,
            z_d_final: series.last().map_or(0.0, |s| s.zd),
            m,
            m_2d_bound: m_2d_bound_from_norms(
                init.limit_besov,
                init.limit_l2,
                cfg.params.mu,
                cfg.params.nu,
                cfg.budget.c_universal,
            ),
            budget,
            energy: energy_balance(series)?,
            constraints: ConstraintReport {
                max_div_b: st.max_div_b,
                max_relative_div_b: st.max_relative_div_b,
                max_mean_drift: st.max_mean_drift,
                min_rho: st.min_rho.unwrap_or(1.0),
                div_b_ok: st.max_relative_div_b <= DIV_TOLERANCE,
                mean_ok: st.max_mean_drift <= MEAN_TOLERANCE,
            },
            lyapunov: LyapunovSummary {
                min_ratio: st.lyapunov_min,
                max_ratio: st.lyapunov_max,
                within_bounds: lyap_ok,
            },
            dev_u_sup: st.dev_u,
            dev_b_sup: st.dev_b,
            kappa_max_a: st.max_kappa_a,
            stats: self.resume.stats,
        })
    }
}

/// Result of a single run; blow-up is reported, not thrown.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub series: FunctionalSeries,
    pub report: RunReport,
    pub checkpoints: Vec<PathBuf>,
}

impl RunOutcome {
    pub fn blew_up(&self) -> bool {
        self.report.blow_up.is_some()
    }
}

/// Drives `sim` to `t_end`, writing checkpoints and outputs as configured.
pub fn run_simulation(mut sim: Simulation) -> Result<RunOutcome> {
    let cfg = sim.config.clone();
    let dir = cfg.outputs.directory.clone();
    let stride = cfg.outputs.checkpoint_stride;
    let mut checkpoints = Vec::new();
    let mut blow_up = None;
    while !sim.is_finished() {
        match sim.step() {
            Ok(()) => {}
            Err(Error::BlowUp { time, reason }) => {
                blow_up = Some(BlowUpRecord { time, reason });
                break;
            }
            Err(Error::SingularDensity { min_density }) => {
                blow_up = Some(BlowUpRecord {
                    time: sim.time(),
                    reason: format!("density lost positivity (min 1+a = {min_density:.3e})"),
                });
                break;
            }
            Err(e) => return Err(e),
        }
        if let Some(d) = &dir {
            if stride > 0 && sim.steps() % stride == 0 && !sim.is_finished() {
                checkpoints.push(sim.write_checkpoint(d)?);
            }
        }
    }
    if let Some(d) = &dir {
        if blow_up.is_none() {
            checkpoints.push(sim.write_checkpoint(d)?);
        }
    }
    let report = sim.report(blow_up)?;
    let outcome = RunOutcome {
        series: sim.resume.series.clone(),
        report,
        checkpoints,
    };
    if let Some(d) = &dir {
        write_outputs(d, &outcome)?;
    }
    Ok(outcome)
}

/// Runs both systems from the configured initial data.
pub fn run_single(config: &RunConfig) -> Result<RunOutcome> {
    run_simulation(Simulation::new(config)?)
}

/// Continues a run from a checkpoint written by [`run_single`].
pub fn resume_run(config: &RunConfig, checkpoint: impl AsRef<Path>) -> Result<RunOutcome> {
    run_simulation(Simulation::resume(config, checkpoint)?)
}

const SERIES_PLOT: &str = "\
set datafile separator ','
set key autotitle columnhead
set xlabel 't'
set logscale y
set terminal pngcairo size 1200,800
set output 'functionals.png'
plot 'series.csv' using 1:2 with lines, '' using 1:3 with lines, '' using 1:6 with lines, \\
     '' using 1:13 with lines, '' using 1:14 with lines
set output 'energy.png'
unset logscale y
plot 'series.csv' using 1:7 with lines, '' using 1:8 with lines, '' using 1:9 with lines, \\
     '' using 1:10 with lines
";

fn write_outputs(dir: &Path, outcome: &RunOutcome) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let o = &outcome.report.config.outputs;
    std::fs::write(dir.join("config.json"), outcome.report.config.to_json())?;
    if o.wants(OutputFormat::Csv) {
        std::fs::write(dir.join("series.csv"), outcome.series.to_csv())?;
    }
    if o.wants(OutputFormat::Json) {
        std::fs::write(
            dir.join("report.json"),
            serde_json::to_string_pretty(&outcome.report)?,
        )?;
    }
    if o.wants(OutputFormat::Gnuplot) {
        std::fs::write(dir.join("plot.gp"), SERIES_PLOT)?;
    }
    Ok(())
}
