use serde::{Deserialize, Serialize};

use super::config::{OutputFormat, SweepConfig};
use super::run::{run_single, RunReport};
use crate::diagnostics::TheoremBudget;
use crate::error::{Error, Result};

/// Environment variable capping the number of concurrent sweep members.
pub const THREADS_ENV: &str = "BMHD_THREADS";

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("fit", "need at least two paired points"));
    }
    if x.iter().chain(y).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::UndefinedRatio(
            "log-log fit needs positive finite values".into(),
        ));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::UndefinedRatio("all abscissae equal".into()));
    }
    Ok(sxy / sxx)
}

/// Thread cap from `BMHD_THREADS`, if set.
pub fn threads_from_env() -> Result<Option<usize>> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::param(
                THREADS_ENV,
                format!("expected a positive integer, got `{v}`"),
            )),
        },
        Err(_) => Ok(None),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMember {
    pub kappa: f64,
    pub completed: bool,
    pub blow_up_time: Option<f64>,
    pub dev_u_sup: f64,
    pub dev_b_sup: f64,
    pub z_d_final: f64,
    pub m: f64,
    pub m_saturated: bool,
    pub budget: TheoremBudget,
    pub lyapunov_min: Option<f64>,
    pub lyapunov_max: Option<f64>,
    pub energy_drift: f64,
    pub max_relative_div_b: f64,
    pub max_mean_drift: f64,
}

impl SweepMember {
    fn from_report(r: &RunReport) -> Self {
        SweepMember {
            kappa: r.config.params.kappa(),
            completed: r.completed,
            blow_up_time: r.blow_up.as_ref().map(|b| b.time),
            dev_u_sup: r.dev_u_sup,
            dev_b_sup: r.dev_b_sup,
            z_d_final: r.z_d_final,
            m: r.m.value,
            m_saturated: r.m.saturated,
            budget: r.budget,
            lyapunov_min: r.lyapunov.min_ratio,
            lyapunov_max: r.lyapunov.max_ratio,
            energy_drift: r.energy.max_drift,
            max_relative_div_b: r.constraints.max_relative_div_b,
            max_mean_drift: r.constraints.max_mean_drift,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub members: Vec<SweepMember>,
    /// Fitted exponent of `sup_t ‖u − U‖` against `κ`.
    pub slope_u: Option<f64>,
    pub slope_b: Option<f64>,
    pub deviations_strictly_decreasing: bool,
    pub delta0_decreasing: bool,
    /// Some member blew up; fits use completed members only.
    pub partial: bool,
}

impl SweepReport {
    pub fn from_members(members: Vec<SweepMember>) -> Self {
        let ok: Vec<&SweepMember> = members.iter().filter(|m| m.completed).collect();
        let ks: Vec<f64> = ok.iter().map(|m| m.kappa).collect();
        let du: Vec<f64> = ok.iter().map(|m| m.dev_u_sup).collect();
        let db: Vec<f64> = ok.iter().map(|m| m.dev_b_sup).collect();
        let partial = ok.len() != members.len();
        SweepReport {
            slope_u: fit_loglog_slope(&ks, &du).ok(),
            slope_b: fit_loglog_slope(&ks, &db).ok(),
            deviations_strictly_decreasing: !partial && du.windows(2).all(|w| w[1] < w[0]),
            delta0_decreasing: members
                .windows(2)
                .all(|w| w[1].budget.delta0 <= w[0].budget.delta0),
            partial,
            members,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from(
            "kappa,dev_u,dev_b,Zd,M,D0,delta0,kappa_check,delta_check,lyap_min,lyap_max,completed\n",
        );
        for m in &self.members {
            s.push_str(&format!(
                "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{},{},{:e},{:e},{}\n",
                m.kappa,
                m.dev_u_sup,
                m.dev_b_sup,
                m.z_d_final,
                m.m,
                m.budget.d0,
                m.budget.delta0,
                m.budget.kappa_check as u8,
                m.budget.delta_check as u8,
                m.lyapunov_min.unwrap_or(f64::NAN),
                m.lyapunov_max.unwrap_or(f64::NAN),
                m.completed as u8
            ));
        }
        s
    }
}

const SWEEP_PLOT: &str = "\
set datafile separator ','
set key autotitle columnhead
set logscale xy
set xlabel 'kappa'
set terminal pngcairo size 1000,700
set output 'sweep.png'
f(x) = c * x**p
fit f(x) 'sweep.csv' using 1:2 via c, p
plot 'sweep.csv' using 1:2 with linespoints, '' using 1:3 with linespoints, f(x) title sprintf('fit slope %.3f', p)
";

/// Number of worker threads: the configured parallelism, capped by
/// `BMHD_THREADS` and by the number of members.
pub fn sweep_threads(config: &SweepConfig) -> Result<usize> {
    let avail = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut n = config.parallelism.unwrap_or(avail);
    if let Some(cap) = threads_from_env()? {
        n = n.min(cap);
    }
    Ok(n.clamp(1, config.kappa_values.len()))
}

/// Runs every member concurrently and aggregates the κ-scaling report.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    config.validate()?;
    let threads = sweep_threads(config)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let reports: Vec<Result<RunReport>> = pool.install(|| {
        use rayon::prelude::*;
        (0..config.kappa_values.len())
            .into_par_iter()
            .map(|i| run_single(&config.member(i)).map(|o| o.report))
            .collect()
    });
    let mut members = Vec::with_capacity(reports.len());
    for r in reports {
        members.push(SweepMember::from_report(&r?));
    }
    let report = SweepReport::from_members(members);
    if let Some(dir) = &config.base.outputs.directory {
        std::fs::create_dir_all(dir)?;
        let o = &config.base.outputs;
        std::fs::write(
            dir.join("sweep_config.json"),
            serde_json::to_string_pretty(config)?,
        )?;
        if o.wants(OutputFormat::Csv) {
            std::fs::write(dir.join("sweep.csv"), report.to_csv())?;
        }
        if o.wants(OutputFormat::Json) {
            std::fs::write(
                dir.join("sweep_report.json"),
                serde_json::to_string_pretty(&report)?,
            )?;
        }
        if o.wants(OutputFormat::Gnuplot) {
            std::fs::write(dir.join("sweep.gp"), SWEEP_PLOT)?;
        }
    }
    Ok(report)
}
