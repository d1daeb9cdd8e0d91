//! A small κ-sweep: sup-in-time distance between the compressible and the
//! incompressible solution, and the fitted power of κ.
//!
//! Pass a grid size as the first argument (default 32).

use bmhd::harness::{run_sweep, RunConfig, SweepConfig};
use bmhd::models::PhysParams;
use bmhd::spectral::GridSpec;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let n = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(32);
    let mut base = RunConfig::new(GridSpec::new(n, 2.0 * PI)?, PhysParams::new(0.5, 9.0, 0.5, 1.4)?);
    base.stepper.t_end = 0.5;
    let sweep = SweepConfig {
        base,
        kappa_values: vec![10.0, 100.0, 1000.0, 10000.0],
        parallelism: None,
    };
    let r = run_sweep(&sweep)?;
    for m in &r.members {
        println!(
            "kappa {:>7.0e}  sup|u-U| {:.3e}  sup|b-B| {:.3e}  Lyapunov ratios [{:.3}, {:.3}]",
            m.kappa,
            m.dev_u_sup,
            m.dev_b_sup,
            m.lyapunov_min.unwrap_or(f64::NAN),
            m.lyapunov_max.unwrap_or(f64::NAN)
        );
    }
    println!("slope {:?}, strictly decreasing {}", r.slope_u, r.deviations_strictly_decreasing);
    Ok(())
}
