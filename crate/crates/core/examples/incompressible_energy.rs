//! Decaying Taylor-Green MHD flow in the incompressible system, checking the
//! energy identity along the way.

use bmhd::harness::make_initial_data;
use bmhd::integrate::step_incompressible;
use bmhd::models::{gradient_sq_norm, PhysParams};
use bmhd::spectral::GridSpec;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let g = GridSpec::new(64, 2.0 * PI)?;
    let p = PhysParams::new(0.1, 1.0, 0.1, 1.4)?;
    let (_, mut s) = make_initial_data("taylor-green-mhd", 0.5, 0, &g)?;
    let dt = 0.002;
    let total = |s: &bmhd::models::IncompressibleState| s.u.l2_norm().powi(2) + s.b.l2_norm().powi(2);
    let e0 = total(&s);
    let mut diss = 0.0;
    let mut prev = 2.0 * p.mu * gradient_sq_norm(&s.u) + 2.0 * p.nu * gradient_sq_norm(&s.b);
    for step in 1..=500 {
        s = step_incompressible(&s, &p, dt)?;
        let cur = 2.0 * p.mu * gradient_sq_norm(&s.u) + 2.0 * p.nu * gradient_sq_norm(&s.b);
        diss += 0.5 * dt * (prev + cur);
        prev = cur;
        if step % 100 == 0 {
            let (ek, em) = s.energies();
            println!(
                "t = {:.2}  E_kin {ek:.6}  E_mag {em:.6}  balance drift {:.2e}",
                s.t,
                (total(&s) + diss - e0).abs() / e0
            );
        }
    }
    Ok(())
}
