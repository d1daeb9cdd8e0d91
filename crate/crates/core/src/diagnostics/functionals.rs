use serde::{Deserialize, Serialize};

use super::lyapunov::{lyapunov_blocks, ratio_range};
use crate::error::{Error, Result};
use crate::integrate::NormAccumulator;
use crate::lp::{b21, b21_vec, low_high_split, DyadicProfile};
use crate::models::{
    divergence_stats, gradient_sq_norm, rhs_compressible, rhs_incompressible, CompressibleState,
    IncompressibleState, PhysParams,
};
use crate::spectral::{
    gradient, helmholtz_split, laplacian, laplacian_vec, project_p, project_q, GridSpec,
    SpectralField, VectorField,
};

/// Column order of the series CSV.
pub const CSV_COLUMNS: [&str; 14] = [
    "t",
    "Xd",
    "Yd",
    "Yd1",
    "Yd2",
    "Zd",
    "E_kin",
    "E_mag",
    "diss_U",
    "diss_B",
    "div_b_max",
    "min_rho",
    "dev_u",
    "dev_b",
];

/// Relative tolerance for two runs to count as sampled at the same time.
pub const TIME_MATCH_TOLERANCE: f64 = 1e-12;

/// One row of the series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSample {
    pub t: f64,
    pub xd: f64,
    pub yd: f64,
    pub yd1: f64,
    pub yd2: f64,
    pub zd: f64,
    /// `½‖U‖²`.
    pub e_kin: f64,
    /// `½‖B‖²`.
    pub e_mag: f64,
    /// `2μ∫‖∇U‖²`.
    pub diss_u: f64,
    /// `2ν∫‖∇B‖²`.
    pub diss_b: f64,
    pub div_b_max: f64,
    pub min_rho: f64,
    /// Running supremum of `‖u − U‖` in the critical Besov space.
    pub dev_u: f64,
    pub dev_b: f64,
}

impl FunctionalSample {
    pub fn values(&self) -> [f64; 14] {
        [
            self.t,
            self.xd,
            self.yd,
            self.yd1,
            self.yd2,
            self.zd,
            self.e_kin,
            self.e_mag,
            self.diss_u,
            self.diss_b,
            self.div_b_max,
            self.min_rho,
            self.dev_u,
            self.dev_b,
        ]
    }

    pub fn from_values(v: &[f64; 14]) -> Self {
        FunctionalSample {
            t: v[0],
            xd: v[1],
            yd: v[2],
            yd1: v[3],
            yd2: v[4],
            zd: v[5],
            e_kin: v[6],
            e_mag: v[7],
            diss_u: v[8],
            diss_b: v[9],
            div_b_max: v[10],
            min_rho: v[11],
            dev_u: v[12],
            dev_b: v[13],
        }
    }
}

/// Time-ordered functional samples.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FunctionalSeries {
    pub samples: Vec<FunctionalSample>,
}

impl FunctionalSeries {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a sample; times must be strictly increasing.
    pub fn push(&mut self, s: FunctionalSample) -> Result<()> {
        if let Some(last) = self.samples.last() {
            if !(s.t > last.t) {
                return Err(Error::TimeRegression {
                    t: s.t,
                    last: last.t,
                });
            }
        }
        self.samples.push(s);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last(&self) -> Option<&FunctionalSample> {
        self.samples.last()
    }

    /// Samples with `t ≤ T` (up to rounding).
    pub fn until(&self, t_max: f64) -> &[FunctionalSample] {
        let tol = TIME_MATCH_TOLERANCE * t_max.abs().max(1.0);
        let k = self.samples.partition_point(|s| s.t <= t_max + tol);
        &self.samples[..k]
    }

    pub fn to_csv(&self) -> String {
        let mut out = CSV_COLUMNS.join(",");
        out.push('\n');
        for s in &self.samples {
            let row: Vec<String> = s.values().iter().map(|v| format!("{v:e}")).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Config("empty series file".into()))?;
        if header.trim() != CSV_COLUMNS.join(",") {
            return Err(Error::Config(format!("unexpected series header: {header}")));
        }
        let mut series = FunctionalSeries::new();
        for (no, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> =
                line.split(',').map(|x| x.trim().parse::<f64>()).collect();
            let vals = parsed.map_err(|e| Error::Config(format!("series line {}: {e}", no + 2)))?;
            let arr: [f64; 14] = vals.try_into().map_err(|_| {
                Error::Config(format!("series line {}: expected 14 columns", no + 2))
            })?;
            series.push(FunctionalSample::from_values(&arr))?;
        }
        Ok(series)
    }
}

/// Instantaneous contributions at one sample time, before time norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InstantTerms {
    /// `‖Qv, a, κ∇a‖`.
    pub x_sup: f64,
    /// `‖Qv_t + ∇a, κ∇²Qv, κ∇²a^ℓ, ∇a^h‖`.
    pub x_int: f64,
    /// `‖Pv, c‖`.
    pub y_sup: f64,
    /// `‖Pv_t, c_t, μ∇²Pv, ν∇²c‖`.
    pub y_int: f64,
    pub dev_u: f64,
    pub dev_b: f64,
}

/// `‖U, B‖` and `‖U_t, B_t, μ∇²U, ν∇²B‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitTerms {
    pub z_sup: f64,
    pub z_int: f64,
}

fn critical_index(grid: &GridSpec) -> f64 {
    grid.d as f64 / 2.0 - 1.0
}

/// Limit-system terms of `Z_d`, with `U_t, B_t` from the right-hand side.
pub fn limit_terms(
    profile: &DyadicProfile,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<LimitTerms> {
    let s = critical_index(inc.grid());
    let rhs = rhs_incompressible(inc, params)?;
    let nb = |v: &VectorField| b21_vec(profile, v, s);
    Ok(LimitTerms {
        z_sup: nb(&inc.u) + nb(&inc.b),
        z_int: nb(&rhs.u)
            + nb(&rhs.b)
            + params.mu * nb(&laplacian_vec(&inc.u))
            + params.nu * nb(&laplacian_vec(&inc.b)),
    })
}

/// Deviation terms of `X_d` and `Y_d` at one shared sample time.
///
/// `Qv_t = Q u_t` and `Pv_t = P u_t − U_t` use the right-hand sides of both
/// systems. `∇²` is measured through `Δ`, which has the same block norms.
pub fn deviation_terms(
    profile: &DyadicProfile,
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<InstantTerms> {
    check_times(comp.t, inc.t)?;
    comp.a.check_same_grid(inc.u.component(0))?;
    let s = critical_index(comp.grid());
    let kappa = params.kappa();
    let nv = |v: &VectorField| b21_vec(profile, v, s);
    let ns = |f: &SpectralField| b21(profile, f, s);

    let v = &comp.u - &inc.u;
    let c = &comp.b - &inc.b;
    let (pv, qv) = helmholtz_split(&v);
    let grad_a = gradient(&comp.a);
    let (a_lo, a_hi) = low_high_split(profile, &comp.a, kappa);

    let crhs = rhs_compressible(comp, params)?;
    let irhs = rhs_incompressible(inc, params)?;
    let (pu_t, qu_t) = helmholtz_split(&crhs.u);
    let acoustic = &qu_t + &grad_a;
    let pv_t = &pu_t - &irhs.u;
    let c_t = &crhs.b - &irhs.b;

    let x_sup = nv(&qv) + ns(&comp.a) + kappa * nv(&grad_a);
    let x_int = nv(&acoustic)
        + kappa * nv(&laplacian_vec(&qv))
        + kappa * ns(&laplacian(&a_lo))
        + nv(&gradient(&a_hi));
    let y_sup = nv(&pv) + nv(&c);
    let y_int = nv(&pv_t)
        + nv(&c_t)
        + params.mu * nv(&laplacian_vec(&pv))
        + params.nu * nv(&laplacian_vec(&c));
    Ok(InstantTerms {
        x_sup,
        x_int,
        y_sup,
        y_int,
        dev_u: nv(&v),
        dev_b: nv(&c),
    })
}

fn check_times(t_comp: f64, t_inc: f64) -> Result<()> {
    if (t_comp - t_inc).abs() > TIME_MATCH_TOLERANCE * t_comp.abs().max(1.0) {
        return Err(Error::MismatchedTimelines(format!(
            "compressible sample at t={t_comp}, incompressible at t={t_inc}"
        )));
    }
    Ok(())
}

/// Accumulated time norms and running extremes; serializable so that a run
/// can be resumed from a checkpoint.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TrackerState {
    pub x_sup: NormAccumulator,
    pub x_int: NormAccumulator,
    pub y_sup: NormAccumulator,
    pub y_int: NormAccumulator,
    pub z_sup: NormAccumulator,
    pub z_int: NormAccumulator,
    pub grad_u_sq: NormAccumulator,
    pub grad_b_sq: NormAccumulator,
    pub dev_u: f64,
    pub dev_b: f64,
    pub initial_mean_a: Option<f64>,
    pub max_mean_drift: f64,
    pub max_relative_div_b: f64,
    pub max_div_b: f64,
    pub min_rho: Option<f64>,
    /// `sup_t κ max|a|`.
    pub max_kappa_a: f64,
    pub lyapunov_min: Option<f64>,
    pub lyapunov_max: Option<f64>,
}

/// Streaming evaluator of the functional series over a coupled run.
#[derive(Debug, Clone)]
pub struct FunctionalTracker {
    profile: DyadicProfile,
    params: PhysParams,
    state: TrackerState,
    lyapunov: bool,
}

impl FunctionalTracker {
    pub fn new(grid: &GridSpec, params: &PhysParams) -> Self {
        Self::resume(grid, params, TrackerState::default())
    }

    pub fn resume(grid: &GridSpec, params: &PhysParams, state: TrackerState) -> Self {
        FunctionalTracker {
            profile: DyadicProfile::new(grid),
            params: *params,
            state,
            lyapunov: true,
        }
    }

    /// Skips the per-block Lyapunov evaluation.
    pub fn without_lyapunov(mut self) -> Self {
        self.lyapunov = false;
        self
    }

    pub fn profile(&self) -> &DyadicProfile {
        &self.profile
    }

    pub fn state(&self) -> &TrackerState {
        &self.state
    }

    /// Evaluates every functional at the shared time of `comp` and `inc`.
    pub fn record(
        &mut self,
        comp: &CompressibleState,
        inc: &IncompressibleState,
    ) -> Result<FunctionalSample> {
        let p = &self.params;
        let t = comp.t;
        let dev = deviation_terms(&self.profile, comp, inc, p)?;
        let lim = limit_terms(&self.profile, inc, p)?;
        let st = &mut self.state;
        st.x_sup.push(t, dev.x_sup)?;
        st.x_int.push(t, dev.x_int)?;
        st.y_sup.push(t, dev.y_sup)?;
        st.y_int.push(t, dev.y_int)?;
        st.z_sup.push(t, lim.z_sup)?;
        st.z_int.push(t, lim.z_int)?;
        st.grad_u_sq.push(t, gradient_sq_norm(&inc.u))?;
        st.grad_b_sq.push(t, gradient_sq_norm(&inc.b))?;
        st.dev_u = st.dev_u.max(dev.dev_u);
        st.dev_b = st.dev_b.max(dev.dev_b);

        let samples_a = comp.a.to_samples()?;
        let min_rho = 1.0 + samples_a.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_abs_a = samples_a.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        st.max_kappa_a = st.max_kappa_a.max(p.kappa() * max_abs_a);
        st.min_rho = Some(st.min_rho.map_or(min_rho, |m| m.min(min_rho)));
        let mean = comp.a.mean();
        let reference = *st.initial_mean_a.get_or_insert(mean);
        st.max_mean_drift = st.max_mean_drift.max((mean - reference).abs());
        let (div_b, grad_b) = divergence_stats(&comp.b)?;
        st.max_div_b = st.max_div_b.max(div_b);
        let rel = if grad_b > 0.0 { div_b / grad_b } else { div_b };
        st.max_relative_div_b = st.max_relative_div_b.max(rel);

        if self.lyapunov {
            let blocks = lyapunov_blocks(&self.profile, comp, inc, p)?;
            if let Some((lo, hi)) = ratio_range(&blocks) {
                st.lyapunov_min = Some(st.lyapunov_min.map_or(lo, |m| m.min(lo)));
                st.lyapunov_max = Some(st.lyapunov_max.map_or(hi, |m| m.max(hi)));
            }
        }

        let (e_kin, e_mag) = inc.energies();
        let yd1 = st.y_sup.linf;
        let yd2 = st.y_int.l1;
        Ok(FunctionalSample {
            t,
            xd: st.x_sup.linf + st.x_int.l1,
            yd: yd1 + yd2,
            yd1,
            yd2,
            zd: st.z_sup.linf + st.z_int.l1,
            e_kin,
            e_mag,
            diss_u: 2.0 * p.mu * st.grad_u_sq.l1,
            diss_b: 2.0 * p.nu * st.grad_b_sq.l1,
            div_b_max: div_b,
            min_rho,
            dev_u: st.dev_u,
            dev_b: st.dev_b,
        })
    }
}

fn replay(
    comp_run: &[CompressibleState],
    inc_run: &[IncompressibleState],
    params: &PhysParams,
    t_max: f64,
) -> Result<FunctionalSample> {
    if comp_run.len() != inc_run.len() {
        return Err(Error::MismatchedTimelines(format!(
            "{} compressible samples vs {} incompressible",
            comp_run.len(),
            inc_run.len()
        )));
    }
    let first = comp_run.first().ok_or(Error::EmptyTrajectory)?;
    let mut tracker = FunctionalTracker::new(first.grid(), params).without_lyapunov();
    let tol = TIME_MATCH_TOLERANCE * t_max.abs().max(1.0);
    let mut last = None;
    for (c, i) in comp_run.iter().zip(inc_run) {
        if c.t > t_max + tol {
            break;
        }
        last = Some(tracker.record(c, i)?);
    }
    last.ok_or(Error::EmptyTrajectory)
}

/// `X_d(T)` over sampled trajectories sharing their sample times.
pub fn compute_xd(
    comp_run: &[CompressibleState],
    inc_run: &[IncompressibleState],
    params: &PhysParams,
    t_max: f64,
) -> Result<f64> {
    Ok(replay(comp_run, inc_run, params, t_max)?.xd)
}

/// `(Y_d, Y_{d,1}, Y_{d,2})(T)` over sampled trajectories.
pub fn compute_yd(
    comp_run: &[CompressibleState],
    inc_run: &[IncompressibleState],
    params: &PhysParams,
    t_max: f64,
) -> Result<(f64, f64, f64)> {
    let s = replay(comp_run, inc_run, params, t_max)?;
    Ok((s.yd, s.yd1, s.yd2))
}

/// `Z_d(T)` over a sampled incompressible trajectory.
pub fn compute_zd(inc_run: &[IncompressibleState], params: &PhysParams, t_max: f64) -> Result<f64> {
    let first = inc_run.first().ok_or(Error::EmptyTrajectory)?;
    let profile = DyadicProfile::new(first.grid());
    let mut sup = NormAccumulator::new();
    let mut int = NormAccumulator::new();
    let tol = TIME_MATCH_TOLERANCE * t_max.abs().max(1.0);
    for s in inc_run.iter().take_while(|s| s.t <= t_max + tol) {
        let l = limit_terms(&profile, s, params)?;
        sup.push(s.t, l.z_sup)?;
        int.push(s.t, l.z_int)?;
    }
    if sup.samples == 0 {
        return Err(Error::EmptyTrajectory);
    }
    Ok(sup.linf + int.l1)
}

/// `(sup_t ‖u − U‖, sup_t ‖b − B‖)` in the critical Besov space.
pub fn deviation_norms(
    comp_run: &[CompressibleState],
    inc_run: &[IncompressibleState],
    t_max: f64,
) -> Result<(f64, f64)> {
    if comp_run.len() != inc_run.len() {
        return Err(Error::MismatchedTimelines(
            "trajectory lengths differ".into(),
        ));
    }
    let first = comp_run.first().ok_or(Error::EmptyTrajectory)?;
    let profile = DyadicProfile::new(first.grid());
    let s = critical_index(first.grid());
    let tol = TIME_MATCH_TOLERANCE * t_max.abs().max(1.0);
    let (mut du, mut db) = (0.0f64, 0.0f64);
    for (c, i) in comp_run.iter().zip(inc_run) {
        if c.t > t_max + tol {
            break;
        }
        check_times(c.t, i.t)?;
        du = du.max(b21_vec(&profile, &(&c.u - &i.u), s));
        db = db.max(b21_vec(&profile, &(&c.b - &i.b), s));
    }
    Ok((du, db))
}

/// `X_d(0) = ‖a₀, Qv₀‖ + κ‖a₀‖_{Ḃ^{d/2}}` (critical index for the pair).
pub fn initial_xd(
    profile: &DyadicProfile,
    comp0: &CompressibleState,
    inc0: &IncompressibleState,
    params: &PhysParams,
) -> Result<f64> {
    let (low, high) = initial_data_norms(profile, comp0, inc0)?;
    Ok(low + params.kappa() * high)
}

/// `(‖a₀, Qv₀‖_{Ḃ^{d/2−1}}, ‖a₀‖_{Ḃ^{d/2}})`.
pub fn initial_data_norms(
    profile: &DyadicProfile,
    comp0: &CompressibleState,
    inc0: &IncompressibleState,
) -> Result<(f64, f64)> {
    comp0.a.check_same_grid(inc0.u.component(0))?;
    let s = critical_index(comp0.grid());
    let qv = project_q(&(&comp0.u - &inc0.u));
    Ok((
        b21(profile, &comp0.a, s) + b21_vec(profile, &qv, s),
        b21(profile, &comp0.a, s + 1.0),
    ))
}

/// `‖U₀, B₀‖` in the critical Besov space, with `U₀ = P u₀`.
pub fn limit_data_norm(profile: &DyadicProfile, inc0: &IncompressibleState) -> f64 {
    let s = critical_index(inc0.grid());
    b21_vec(profile, &project_p(&inc0.u), s) + b21_vec(profile, &inc0.b, s)
}
