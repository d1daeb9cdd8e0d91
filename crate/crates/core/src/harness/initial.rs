use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::config::{DensityScaling, InitialDataConfig, RunConfig};
use crate::error::{Error, Result};
use crate::models::{max_magnitude, CompressibleState, IncompressibleState};
use crate::spectral::{
    dealias, dealias_vec, gradient, perp_gradient, project_p, sample_fn, Complex64, GridSpec,
    SpectralField, VectorField,
};

/// Largest integer wavenumber of the random family.
pub const RANDOM_KMAX: i64 = 4;

/// Unit-peak shapes from which both initial states are assembled.
struct Shapes {
    u: VectorField,
    b: VectorField,
    a: SpectralField,
    compressive: VectorField,
}

fn unit_peak_vec(v: VectorField) -> Result<VectorField> {
    let m = max_magnitude(&v)?;
    Ok(if m > 0.0 { v.scale(1.0 / m) } else { v })
}

fn unit_peak(f: SpectralField) -> Result<SpectralField> {
    let m = f.to_samples()?.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(if m > 0.0 { f.scale(1.0 / m) } else { f })
}

/// Seeded real field with integer modes `0 < |k| ≤ kmax` and amplitudes
/// decaying like `1/|k|`. Coefficients depend on the wavevector only, so the
/// same seed gives the same function on every grid that resolves it.
pub fn random_bandlimited_scalar(
    grid: &GridSpec,
    rng: &mut ChaCha8Rng,
    kmax: i64,
) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    for k0 in 0..=kmax {
        for k1 in -kmax..=kmax {
            let r2 = k0 * k0 + k1 * k1;
            if r2 == 0 || r2 > kmax * kmax || (k0 == 0 && k1 < 0) {
                continue;
            }
            let re: f64 = rng.gen_range(-1.0..1.0);
            let im: f64 = rng.gen_range(-1.0..1.0);
            let amp = 1.0 / (r2 as f64).sqrt();
            f.set_mode(k0, k1, Complex64::new(re * amp, im * amp));
        }
    }
    dealias(&f)
}

fn taylor_green_shapes(grid: &GridSpec) -> Result<Shapes> {
    let k = grid.base_wavenumber();
    let field =
        |f: &dyn Fn(f64, f64) -> f64| SpectralField::from_samples(grid, &sample_fn(grid, f));
    let psi_u = field(&|x, y| (k * x).sin() * (k * y).sin())?;
    let psi_b = field(&|x, y| (k * x).cos() * (2.0 * k * y).cos() + 0.5 * (2.0 * k * x).sin())?;
    let a = field(&|x, y| (k * x).cos() * (k * y).cos())?;
    let pot = field(&|x, y| (k * x).sin() * (2.0 * k * y).cos())?;
    Ok(Shapes {
        u: perp_gradient(&psi_u),
        b: perp_gradient(&psi_b),
        a,
        compressive: gradient(&pot),
    })
}

fn random_shapes(grid: &GridSpec, seed: u64) -> Shapes {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let psi_u = random_bandlimited_scalar(grid, &mut rng, RANDOM_KMAX);
    let psi_b = random_bandlimited_scalar(grid, &mut rng, RANDOM_KMAX);
    let a = random_bandlimited_scalar(grid, &mut rng, RANDOM_KMAX);
    let pot = random_bandlimited_scalar(grid, &mut rng, RANDOM_KMAX);
    Shapes {
        u: perp_gradient(&psi_u),
        b: perp_gradient(&psi_b),
        a,
        compressive: gradient(&pot),
    }
}

fn shapes(family: &str, seed: u64, grid: &GridSpec) -> Result<Shapes> {
    let raw = match family {
        "taylor-green-mhd" => taylor_green_shapes(grid)?,
        "random-bandlimited" => random_shapes(grid, seed),
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    Ok(Shapes {
        u: unit_peak_vec(dealias_vec(&raw.u))?,
        b: unit_peak_vec(project_p(&dealias_vec(&raw.b)))?,
        a: unit_peak(dealias(&raw.a).without_mean())?,
        compressive: unit_peak_vec(dealias_vec(&raw.compressive))?,
    })
}

fn assemble(
    s: Shapes,
    amplitude: f64,
    density_amplitude: f64,
    compressive_fraction: f64,
) -> (CompressibleState, IncompressibleState) {
    let u0 =
        s.u.axpy(compressive_fraction, &s.compressive)
            .scale(amplitude);
    let b0 = s.b.scale(amplitude);
    let comp = CompressibleState {
        a: s.a.scale(density_amplitude),
        u: u0.clone(),
        b: b0.clone(),
        t: 0.0,
    };
    let inc = IncompressibleState {
        u: project_p(&u0),
        b: b0,
        t: 0.0,
    };
    (comp, inc)
}

/// Initial states of both systems for a named family, with `U₀ = P u₀`,
/// `B₀ = b₀`, solenoidal `u₀` and density amplitude equal to `amplitude`.
pub fn make_initial_data(
    family: &str,
    amplitude: f64,
    seed: u64,
    grid: &GridSpec,
) -> Result<(CompressibleState, IncompressibleState)> {
    grid.require_2d()?;
    Ok(assemble(
        shapes(family, seed, grid)?,
        amplitude,
        amplitude,
        0.0,
    ))
}

/// Initial states for a run configuration, honoring the density scaling and
/// the compressive part of `u₀`.
pub fn initial_data_for(config: &RunConfig) -> Result<(CompressibleState, IncompressibleState)> {
    let init: &InitialDataConfig = &config.initial_data;
    config.grid.require_2d()?;
    let mut density = init.amplitude * init.density_scale;
    if init.density == DensityScaling::InverseKappa {
        density /= config.params.kappa();
    }
    Ok(assemble(
        shapes(&init.family, init.seed, &config.grid)?,
        init.amplitude,
        density,
        init.compressive_fraction,
    ))
}
