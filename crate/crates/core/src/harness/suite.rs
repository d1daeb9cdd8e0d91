use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::initial::{random_bandlimited_scalar, RANDOM_KMAX};
use crate::diagnostics::{lyapunov_blocks, ratio_range};
use crate::error::Result;
use crate::integrate::step_incompressible;
use crate::lp::{
    check_composition, check_interpolation, check_product, phi, DyadicProfile, LpDecomposition,
};
use crate::models::{gradient_sq_norm, CompressibleState, IncompressibleState, PhysParams};
use crate::spectral::{
    dealias_vec, divergence, helmholtz_split, perp_gradient, project_p, project_q, Complex64,
    GridSpec, SpectralField, VectorField, Wavenumbers,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub checks: Vec<PropertyCheck>,
    pub passed: bool,
}

impl PropertyReport {
    pub fn table(&self) -> String {
        let mut s = format!(
            "{:<40} {:>12} {:>12}  verdict\n",
            "property", "value", "threshold"
        );
        for c in &self.checks {
            s.push_str(&format!(
                "{:<40} {:>12.3e} {:>12.3e}  {}\n",
                c.name,
                c.value,
                c.threshold,
                if c.passed { "pass" } else { "FAIL" }
            ));
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Multiplies every profile weight; anything but 1 breaks the partition.
    pub profile_scale: f64,
    pub seed: u64,
    pub random_fields: usize,
    pub lemma_pairs: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            profile_scale: 1.0,
            seed: 2024,
            random_fields: 20,
            lemma_pairs: 100,
        }
    }
}

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, 2.0 * PI).expect("valid grid")
}

fn check(name: &str, value: f64, threshold: f64) -> PropertyCheck {
    PropertyCheck {
        name: name.to_string(),
        value,
        threshold,
        passed: value <= threshold,
    }
}

/// Seeded solenoidal-plus-gradient vector field with unit-scale coefficients.
pub fn random_vector_field(g: &GridSpec, rng: &mut ChaCha8Rng) -> VectorField {
    let a = random_bandlimited_scalar(g, rng, RANDOM_KMAX);
    let b = random_bandlimited_scalar(g, rng, RANDOM_KMAX);
    VectorField::from_components(vec![a, b]).expect("two components")
}

/// Largest `φ(2^{-j}|ξ|) φ(2^{-k}|ξ|)` with `|j − k| ≥ 2`, evaluated from the
/// profile function directly rather than the stored table.
pub fn direct_overlap(g: &GridSpec) -> f64 {
    let w = Wavenumbers::new(g);
    let p = DyadicProfile::new(g);
    let n = g.n;
    let mut worst: f64 = 0.0;
    for idx in 1..g.len() {
        let r = w.full[idx / n].hypot(w.full[idx % n]);
        let vals: Vec<f64> = p.blocks().map(|j| phi(r / 2f64.powi(j))).collect();
        for a in 0..vals.len() {
            for b in (a + 2)..vals.len() {
                worst = worst.max(vals[a] * vals[b]);
            }
        }
    }
    worst
}

/// `max |Σ_j Δ̇_j f − (f − mean)| / max|f̂|` for a random field.
pub fn reconstruction_residual(profile: &DyadicProfile, f: &SpectralField) -> f64 {
    let rec = LpDecomposition::new(profile, f)
        .reconstruct()
        .unwrap_or_else(|| SpectralField::zeros(profile.grid()));
    rec.max_abs_diff(&f.without_mean()) / f.max_coeff().max(f64::MIN_POSITIVE)
}

/// `(‖P²v − Pv‖, ‖Q²v − Qv‖, ‖PQv‖, ‖div Pv‖)` as largest coefficient moduli.
pub fn projector_defects(v: &VectorField) -> (f64, f64, f64, f64) {
    let (p, q) = helmholtz_split(v);
    (
        project_p(&p).max_abs_diff(&p),
        project_q(&q).max_abs_diff(&q),
        project_p(&q).max_coeff(),
        divergence(&p).max_coeff(),
    )
}

/// Empirical constants of the three lemma checkers over seeded pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaStudy {
    pub pairs: usize,
    pub product_max: f64,
    pub interpolation_max: f64,
    pub composition_max: f64,
    pub all_finite: bool,
    /// Largest relative change of the product and interpolation ratios when
    /// the inputs are rescaled.
    pub scale_defect: f64,
    /// Largest relative difference of any ratio between n = 64 and n = 128.
    pub grid_discrepancy: f64,
}

const RMS: f64 = 0.15;

fn normalized(f: SpectralField) -> SpectralField {
    let rms = f.l2_norm() / f.grid().volume().sqrt();
    if rms > 0.0 {
        f.scale(RMS / rms)
    } else {
        f
    }
}

fn lemma_ratios(p: &DyadicProfile, f: &SpectralField, g: &SpectralField) -> Result<[f64; 3]> {
    Ok([
        check_product(p, f, g, 0.5, 0.5)?,
        check_interpolation(p, f, 0.0, 1.0, 0.5)?,
        check_composition(p, f, 1.0, 1.4)?,
    ])
}

pub fn lemma_study(pairs: usize, seed: u64) -> Result<LemmaStudy> {
    let (g64, g128) = (grid(64), grid(128));
    let (p64, p128) = (DyadicProfile::new(&g64), DyadicProfile::new(&g128));
    let mut out = LemmaStudy {
        pairs,
        product_max: 0.0,
        interpolation_max: 0.0,
        composition_max: 0.0,
        all_finite: true,
        scale_defect: 0.0,
        grid_discrepancy: 0.0,
    };
    for i in 0..pairs {
        let draw = |g: &GridSpec| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let f = normalized(random_bandlimited_scalar(g, &mut rng, RANDOM_KMAX));
            let h = normalized(random_bandlimited_scalar(g, &mut rng, RANDOM_KMAX));
            (f, h)
        };
        let (f, h) = draw(&g64);
        let (f2, h2) = draw(&g128);
        let r64 = lemma_ratios(&p64, &f, &h)?;
        let r128 = lemma_ratios(&p128, &f2, &h2)?;
        out.all_finite &= r64.iter().chain(&r128).all(|r| r.is_finite());
        out.product_max = out.product_max.max(r64[0]);
        out.interpolation_max = out.interpolation_max.max(r64[1]);
        out.composition_max = out.composition_max.max(r64[2]);
        for (a, b) in r64.iter().zip(&r128) {
            out.grid_discrepancy = out
                .grid_discrepancy
                .max((a - b).abs() / a.abs().max(b.abs()));
        }
        for c in [1e-3, 37.0] {
            let sp = check_product(&p64, &f.scale(c), &h.scale(1.0 / c + 1.0), 0.5, 0.5)?;
            let si = check_interpolation(&p64, &f.scale(c), 0.0, 1.0, 0.5)?;
            out.scale_defect = out
                .scale_defect
                .max((sp - r64[0]).abs() / r64[0])
                .max((si - r64[1]).abs() / r64[1]);
        }
    }
    Ok(out)
}

/// Relative drift of the energy balance for a decaying shear mode.
fn heat_mode_drift() -> Result<f64> {
    let g = grid(16);
    let params = PhysParams::new(0.1, 1.0, 0.1, 1.4)?;
    let mut psi = SpectralField::zeros(&g);
    psi.set_mode(1, 0, Complex64::new(0.0, 0.5));
    let mut s = IncompressibleState {
        u: perp_gradient(&psi),
        b: VectorField::zeros(&g),
        t: 0.0,
    };
    let e0 = s.u.l2_norm().powi(2);
    let dt = 1e-3;
    let mut diss = 0.0;
    let mut prev = gradient_sq_norm(&s.u);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        s = step_incompressible(&s, &params, dt)?;
        let cur = gradient_sq_norm(&s.u);
        diss += 2.0 * params.mu * 0.5 * dt * (prev + cur);
        prev = cur;
        worst = worst.max((s.u.l2_norm().powi(2) + diss - e0).abs() / e0);
    }
    Ok(worst)
}

/// Evaluates every structural invariant and returns the verdict table.
pub fn run_property_suite(opts: &SuiteOptions) -> Result<PropertyReport> {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    for n in [64, 128] {
        let g = grid(n);
        let p = DyadicProfile::new(&g).scaled(opts.profile_scale);
        checks.push(check(
            &format!("lp.partition_of_unity.n{n}"),
            p.partition_residual(),
            1e-12,
        ));
        checks.push(check(
            &format!("lp.block_orthogonality.n{n}"),
            direct_overlap(&g),
            0.0,
        ));
        let f = random_bandlimited_scalar(&g, &mut rng, (n as i64) / 3);
        checks.push(check(
            &format!("lp.reconstruction.n{n}"),
            reconstruction_residual(&p, &f),
            1e-12,
        ));
    }

    let g = grid(64);
    let mut worst = [0.0f64; 4];
    for _ in 0..opts.random_fields {
        let v = random_vector_field(&g, &mut rng);
        let d = projector_defects(&v);
        for (w, x) in worst.iter_mut().zip([d.0, d.1, d.2, d.3]) {
            *w = w.max(x);
        }
    }
    checks.push(check("projector.p_idempotent", worst[0], 1e-12));
    checks.push(check("projector.q_idempotent", worst[1], 1e-12));
    checks.push(check("projector.pq_vanishes", worst[2], 1e-12));
    checks.push(check("projector.div_p_vanishes", worst[3], 1e-12));

    let study = lemma_study(opts.lemma_pairs, opts.seed)?;
    checks.push(check(
        "lemma.ratios_finite",
        if study.all_finite { 0.0 } else { 1.0 },
        0.0,
    ));
    checks.push(check("lemma.scale_invariance", study.scale_defect, 1e-10));
    checks.push(check("lemma.grid_stability", study.grid_discrepancy, 0.05));

    let params = PhysParams::new(0.5, 1e3, 0.5, 1.4)?;
    let profile = DyadicProfile::new(&g);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for _ in 0..opts.random_fields {
        let comp = CompressibleState {
            a: random_bandlimited_scalar(&g, &mut rng, 8).scale(1e-3),
            u: dealias_vec(&random_vector_field(&g, &mut rng)).scale(0.1),
            b: VectorField::zeros(&g),
            t: 0.0,
        };
        let inc = IncompressibleState::zeros(&g);
        if let Some((a, b)) = ratio_range(&lyapunov_blocks(&profile, &comp, &inc, &params)?) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    checks.push(check("lyapunov.ratio_lower", 1.0 / 3.0 - lo, 0.0));
    checks.push(check("lyapunov.ratio_upper", hi - 3.0, 0.0));
    checks.push(check("energy.heat_mode_drift", heat_mode_drift()?, 1e-8));

    let passed = checks.iter().all(|c| c.passed);
    Ok(PropertyReport { checks, passed })
}
