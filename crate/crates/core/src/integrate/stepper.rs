use serde::{Deserialize, Serialize};

use super::propagator::{mat_vec, LinearCoefficients, LinearPropagator, PropagatorKind};
use crate::error::{Error, Result};
use crate::models::{
    max_magnitude, rhs_compressible, rhs_incompressible, CompressibleState, IncompressibleState,
    PhysParams,
};
use crate::spectral::{
    dealias, dealias_vec, project_p, Complex64, GridSpec, SpectralField, VectorField, Wavenumbers,
};

/// Smallest admissible step; anything below is treated as blow-up.
pub const MIN_DT: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepperConfig {
    /// Upper bound on the step.
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default = "default_t_end")]
    pub t_end: f64,
    /// Record functionals every `norm_stride` steps (the final time is always recorded).
    #[serde(default = "default_stride")]
    pub norm_stride: usize,
}

fn default_dt() -> f64 {
    0.01
}

fn default_t_end() -> f64 {
    1.0
}

fn default_cfl() -> f64 {
    0.4
}

fn default_stride() -> usize {
    1
}

impl StepperConfig {
    pub fn new(dt: f64, t_end: f64) -> Self {
        StepperConfig {
            dt,
            cfl: default_cfl(),
            t_end,
            norm_stride: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::param("stepper.dt", "must be positive and finite"));
        }
        if !(self.cfl > 0.0 && self.cfl.is_finite()) {
            return Err(Error::param("stepper.cfl", "must be positive and finite"));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::param(
                "stepper.t_end",
                "must be non-negative and finite",
            ));
        }
        if self.norm_stride == 0 {
            return Err(Error::param("stepper.norm_stride", "must be at least 1"));
        }
        Ok(())
    }
}

/// A system `w_t = L w + N(w)` whose linear part has exact matrix functions.
pub trait SplitSystem {
    type State: Clone;

    fn nonlinear(&self, w: &Self::State) -> Result<Self::State>;
    /// `exp(dt L) w` or `dt φ_k(dt L) w` for the step the system was built with.
    fn propagate(&self, kind: PropagatorKind, w: &Self::State) -> Self::State;
    /// `x + s y`.
    fn combine(x: &Self::State, s: f64, y: &Self::State) -> Self::State;
}

/// Second-order exponential Runge-Kutta step (ETD2RK):
///
/// ```text
/// w* = exp(dt L) w + dt φ1(dt L) N(w)
/// w⁺ = w* + dt φ2(dt L) (N(w*) − N(w))
/// ```
///
/// Stiff modes relax onto the slaved balance `L w ≈ −N(w)` instead of
/// picking up an O(dt) forcing error.
pub fn etd2rk<S: SplitSystem>(sys: &S, w: &S::State) -> Result<S::State> {
    let n0 = sys.nonlinear(w)?;
    let pred = S::combine(
        &sys.propagate(PropagatorKind::Exp, w),
        1.0,
        &sys.propagate(PropagatorKind::Phi1, &n0),
    );
    let n1 = sys.nonlinear(&pred)?;
    let corr = sys.propagate(PropagatorKind::Phi2, &S::combine(&n1, -1.0, &n0));
    Ok(S::combine(&pred, 1.0, &corr))
}

fn acoustic_direction(w: &Wavenumbers, n: usize, idx: usize) -> Option<(f64, f64, f64)> {
    let (o0, o1) = (w.odd[idx / n], w.odd[idx % n]);
    let k = (o0 * o0 + o1 * o1).sqrt();
    (k > 0.0).then(|| (o0 / k, o1 / k, k))
}

/// Action of the constant-coefficient linear part on a compressible state.
pub fn apply_linear_compressible(
    state: &CompressibleState,
    coeffs: &LinearCoefficients,
) -> CompressibleState {
    let grid = *state.grid();
    let n = grid.n;
    let w = Wavenumbers::new(&grid);
    let mut a = vec![Complex64::new(0.0, 0.0); grid.len()];
    let mut u0 = a.clone();
    let mut u1 = a.clone();
    let (sa, su0, su1) = (
        state.a.coeffs(),
        state.u.component(0).coeffs(),
        state.u.component(1).coeffs(),
    );
    let i = Complex64::new(0.0, 1.0);
    for idx in 0..grid.len() {
        let (o0, o1) = (w.odd[idx / n], w.odd[idx % n]);
        let (f0, f1) = (w.full[idx / n], w.full[idx % n]);
        let k2 = f0 * f0 + f1 * f1;
        let div = i * (o0 * su0[idx] + o1 * su1[idx]);
        a[idx] = -div;
        let grad_div = (o0 * i * div, o1 * i * div);
        u0[idx] = -i * o0 * sa[idx] - coeffs.shear * k2 * su0[idx] + coeffs.bulk * grad_div.0;
        u1[idx] = -i * o1 * sa[idx] - coeffs.shear * k2 * su1[idx] + coeffs.bulk * grad_div.1;
    }
    let b = state.b.map(|c| {
        c.apply_multiplier(|_, k0, k1| {
            let base = grid.base_wavenumber();
            let k2 = base * base * ((k0 * k0 + k1 * k1) as f64);
            Complex64::new(-coeffs.resistivity * k2, 0.0)
        })
    });
    CompressibleState {
        a: SpectralField::from_coeffs(&grid, a).expect("linear map preserves symmetry"),
        u: VectorField::from_components(vec![
            SpectralField::from_coeffs(&grid, u0).expect("linear map preserves symmetry"),
            SpectralField::from_coeffs(&grid, u1).expect("linear map preserves symmetry"),
        ])
        .expect("two components"),
        b,
        t: state.t,
    }
}

/// `exp(dt L) state` using a precomputed propagator table.
pub fn propagate_compressible(
    prop: &LinearPropagator,
    state: &CompressibleState,
) -> CompressibleState {
    propagate_compressible_as(prop, PropagatorKind::Exp, state)
}

pub fn propagate_compressible_as(
    prop: &LinearPropagator,
    kind: PropagatorKind,
    state: &CompressibleState,
) -> CompressibleState {
    let grid = *state.grid();
    let n = grid.n;
    let w = Wavenumbers::new(&grid);
    let mut a = state.a.coeffs().to_vec();
    let mut u0 = state.u.component(0).coeffs().to_vec();
    let mut u1 = state.u.component(1).coeffs().to_vec();
    let mut b0 = state.b.component(0).coeffs().to_vec();
    let mut b1 = state.b.component(1).coeffs().to_vec();
    for idx in 0..grid.len() {
        let m = prop.mode_of(kind, idx);
        b0[idx] *= m.magnetic;
        b1[idx] *= m.magnetic;
        match acoustic_direction(&w, n, idx) {
            Some((e0, e1, _)) => {
                let q = e0 * u0[idx] + e1 * u1[idx];
                let (t0, t1) = (u0[idx] - e0 * q, u1[idx] - e1 * q);
                let [a_new, q_new] = mat_vec(&m.acoustic, [a[idx], q]);
                a[idx] = a_new;
                u0[idx] = e0 * q_new + m.transverse * t0;
                u1[idx] = e1 * q_new + m.transverse * t1;
            }
            None => {
                u0[idx] *= m.transverse;
                u1[idx] *= m.transverse;
            }
        }
    }
    let field = |c: Vec<Complex64>| {
        SpectralField::from_coeffs(&grid, c).expect("propagator preserves symmetry")
    };
    CompressibleState {
        a: field(a),
        u: VectorField::from_components(vec![field(u0), field(u1)]).expect("two components"),
        b: VectorField::from_components(vec![field(b0), field(b1)]).expect("two components"),
        t: state.t,
    }
}

/// `exp(dt L) state` for the incompressible heat parts.
pub fn propagate_incompressible(
    prop: &LinearPropagator,
    state: &IncompressibleState,
) -> IncompressibleState {
    propagate_incompressible_as(prop, PropagatorKind::Exp, state)
}

pub fn propagate_incompressible_as(
    prop: &LinearPropagator,
    kind: PropagatorKind,
    state: &IncompressibleState,
) -> IncompressibleState {
    let scale = |v: &VectorField, pick: fn(&super::propagator::ModePropagator) -> f64| {
        v.map(|c| {
            c.apply_multiplier(|idx, _, _| Complex64::new(pick(prop.mode_of(kind, idx)), 0.0))
        })
    };
    IncompressibleState {
        u: scale(&state.u, |m| m.inc_velocity),
        b: scale(&state.b, |m| m.inc_magnetic),
        t: state.t,
    }
}

fn combine_comp(x: &CompressibleState, s: f64, y: &CompressibleState) -> CompressibleState {
    CompressibleState {
        a: x.a.axpy(s, &y.a),
        u: x.u.axpy(s, &y.u),
        b: x.b.axpy(s, &y.b),
        t: x.t,
    }
}

/// The compressible system split as (linear part with `coeffs`, remainder).
pub struct CompressibleSplit<'a> {
    pub params: &'a PhysParams,
    pub coeffs: LinearCoefficients,
    pub propagator: &'a LinearPropagator,
}

impl SplitSystem for CompressibleSplit<'_> {
    type State = CompressibleState;

    fn nonlinear(&self, w: &CompressibleState) -> Result<CompressibleState> {
        let f = rhs_compressible(w, self.params)?;
        let full = CompressibleState {
            a: f.a,
            u: f.u,
            b: f.b,
            t: w.t,
        };
        Ok(combine_comp(
            &full,
            -1.0,
            &apply_linear_compressible(w, &self.coeffs),
        ))
    }

    fn propagate(&self, kind: PropagatorKind, w: &CompressibleState) -> CompressibleState {
        propagate_compressible_as(self.propagator, kind, w)
    }

    fn combine(x: &CompressibleState, s: f64, y: &CompressibleState) -> CompressibleState {
        combine_comp(x, s, y)
    }
}

/// The incompressible system split as (heat parts, projected nonlinearity).
pub struct IncompressibleSplit<'a> {
    pub params: &'a PhysParams,
    pub propagator: &'a LinearPropagator,
}

impl SplitSystem for IncompressibleSplit<'_> {
    type State = IncompressibleState;

    fn nonlinear(&self, w: &IncompressibleState) -> Result<IncompressibleState> {
        let f = rhs_incompressible(w, self.params)?;
        let lap = |v: &VectorField, c: f64| v.map(|x| crate::spectral::laplacian(x)).scale(c);
        Ok(IncompressibleState {
            u: &f.u - &lap(&w.u, self.params.mu),
            b: &f.b - &lap(&w.b, self.params.nu),
            t: w.t,
        })
    }

    fn propagate(&self, kind: PropagatorKind, w: &IncompressibleState) -> IncompressibleState {
        propagate_incompressible_as(self.propagator, kind, w)
    }

    fn combine(x: &IncompressibleState, s: f64, y: &IncompressibleState) -> IncompressibleState {
        IncompressibleState {
            u: x.u.axpy(s, &y.u),
            b: x.b.axpy(s, &y.b),
            t: x.t,
        }
    }
}

/// Projects, truncates and restores the conserved mean after a step.
fn finish_compressible(
    mut next: CompressibleState,
    mean_a: f64,
    t: f64,
) -> Result<CompressibleState> {
    next.a = dealias(&next.a);
    next.a.set_mean(mean_a);
    next.u = dealias_vec(&next.u);
    next.b = project_p(&dealias_vec(&next.b));
    next.t = t;
    if !next.is_finite() {
        return Err(Error::BlowUp {
            time: t,
            reason: "non-finite compressible state".into(),
        });
    }
    let rho = next.min_density()?;
    if !(rho > 0.0) {
        return Err(Error::BlowUp {
            time: t,
            reason: format!("density lost positivity (min 1+a = {rho:.3e})"),
        });
    }
    Ok(next)
}

fn finish_incompressible(mut next: IncompressibleState, t: f64) -> Result<IncompressibleState> {
    next.u = project_p(&dealias_vec(&next.u));
    next.b = project_p(&dealias_vec(&next.b));
    next.t = t;
    if !next.is_finite() {
        return Err(Error::BlowUp {
            time: t,
            reason: "non-finite incompressible state".into(),
        });
    }
    Ok(next)
}

/// Stabilization factor `max(1, 1/min ρ)`, rounded up to a multiple of 1/16
/// so that consecutive steps can share a propagator table.
pub fn stabilization_factor(min_density: f64) -> f64 {
    if !(min_density > 0.0) {
        return f64::INFINITY;
    }
    ((16.0 / min_density).ceil() / 16.0).max(1.0)
}

/// One step of the compressible system with fixed linear coefficients.
pub fn step_compressible_with(
    state: &CompressibleState,
    params: &PhysParams,
    propagator: &LinearPropagator,
) -> Result<CompressibleState> {
    let dt = propagator.dt();
    let sys = CompressibleSplit {
        params,
        coeffs: propagator.coefficients(),
        propagator,
    };
    let next = etd2rk(&sys, state)?;
    finish_compressible(next, state.a.mean(), state.t + dt)
}

/// One step of the compressible system with the stabilized linear part.
pub fn step_compressible(
    state: &CompressibleState,
    params: &PhysParams,
    dt: f64,
) -> Result<CompressibleState> {
    let factor = stabilization_factor(state.min_density()?);
    if !factor.is_finite() {
        return Err(Error::BlowUp {
            time: state.t,
            reason: "non-positive density".into(),
        });
    }
    let coeffs = LinearCoefficients::stabilized(params, factor);
    let prop = LinearPropagator::new(state.grid(), coeffs, (params.mu, params.nu), dt);
    step_compressible_with(state, params, &prop)
}

/// One step of the incompressible system.
pub fn step_incompressible(
    state: &IncompressibleState,
    params: &PhysParams,
    dt: f64,
) -> Result<IncompressibleState> {
    let prop = LinearPropagator::new(
        state.grid(),
        LinearCoefficients::physical(params),
        (params.mu, params.nu),
        dt,
    );
    step_incompressible_with(state, params, &prop)
}

pub fn step_incompressible_with(
    state: &IncompressibleState,
    params: &PhysParams,
    propagator: &LinearPropagator,
) -> Result<IncompressibleState> {
    let dt = propagator.dt();
    let sys = IncompressibleSplit { params, propagator };
    let next = etd2rk(&sys, state)?;
    finish_incompressible(next, state.t + dt)
}

/// Advective bound `cfl Δx / (max|u| + max|b| + max|U| + max|B| + c_max)`
/// with `c_max = sqrt(P′(ρ_max))`; infinite for a motionless state with no
/// sound speed.
pub fn cfl_bound(
    comp: &CompressibleState,
    inc: Option<&IncompressibleState>,
    params: &PhysParams,
    cfl: f64,
) -> Result<f64> {
    let grid: &GridSpec = comp.grid();
    let law = params.pressure();
    let mut speed = max_magnitude(&comp.u)? + max_magnitude(&comp.b)?;
    speed += law.sound_speed(comp.max_density()?);
    if let Some(inc) = inc {
        speed += max_magnitude(&inc.u)? + max_magnitude(&inc.b)?;
    }
    if !speed.is_finite() {
        return Err(Error::BlowUp {
            time: comp.t,
            reason: "non-finite wave speed".into(),
        });
    }
    Ok(if speed > 0.0 {
        cfl * grid.spacing() / speed
    } else {
        f64::INFINITY
    })
}

/// Step size `min(config.dt, cfl_bound)`, shortened to land on `t_end`.
///
/// The viscous and linear acoustic parts are integrated exactly and impose
/// no restriction.
pub fn adaptive_dt(
    comp: &CompressibleState,
    inc: Option<&IncompressibleState>,
    params: &PhysParams,
    config: &StepperConfig,
) -> Result<f64> {
    let mut dt = config.dt.min(cfl_bound(comp, inc, params, config.cfl)?);
    if dt < MIN_DT {
        return Err(Error::BlowUp {
            time: comp.t,
            reason: format!("time step underflow (dt = {dt:.3e})"),
        });
    }
    let left = config.t_end - comp.t;
    if left > 0.0 && left < dt * (1.0 + 1e-9) {
        dt = left;
    }
    Ok(dt)
}

/// Caches propagator tables across steps with equal `(dt, coefficients)`.
#[derive(Debug, Default)]
pub struct PropagatorCache {
    comp: Option<LinearPropagator>,
    inc: Option<LinearPropagator>,
}

impl PropagatorCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn compressible(
        &mut self,
        grid: &GridSpec,
        params: &PhysParams,
        factor: f64,
        dt: f64,
    ) -> &LinearPropagator {
        let coeffs = LinearCoefficients::stabilized(params, factor);
        let stale = match &self.comp {
            Some(p) => p.dt() != dt || p.coefficients() != coeffs || !p.grid().same_as(grid),
            None => true,
        };
        if stale {
            self.comp = Some(LinearPropagator::new(
                grid,
                coeffs,
                (params.mu, params.nu),
                dt,
            ));
        }
        self.comp.as_ref().expect("just filled")
    }

    pub fn incompressible(
        &mut self,
        grid: &GridSpec,
        params: &PhysParams,
        dt: f64,
    ) -> &LinearPropagator {
        let coeffs = LinearCoefficients::physical(params);
        let stale = match &self.inc {
            Some(p) => p.dt() != dt || !p.grid().same_as(grid),
            None => true,
        };
        if stale {
            self.inc = Some(LinearPropagator::new(
                grid,
                coeffs,
                (params.mu, params.nu),
                dt,
            ));
        }
        self.inc.as_ref().expect("just filled")
    }
}

/// Stabilized compressible step that reuses tables from `cache`.
pub fn step_compressible_cached(
    cache: &mut PropagatorCache,
    state: &CompressibleState,
    params: &PhysParams,
    dt: f64,
) -> Result<CompressibleState> {
    let factor = stabilization_factor(state.min_density()?);
    if !factor.is_finite() {
        return Err(Error::BlowUp {
            time: state.t,
            reason: "non-positive density".into(),
        });
    }
    let prop = cache.compressible(state.grid(), params, factor, dt);
    step_compressible_with(state, params, prop)
}

pub fn step_incompressible_cached(
    cache: &mut PropagatorCache,
    state: &IncompressibleState,
    params: &PhysParams,
    dt: f64,
) -> Result<IncompressibleState> {
    let prop = cache.incompressible(state.grid(), params, dt);
    step_incompressible_with(state, params, prop)
}
