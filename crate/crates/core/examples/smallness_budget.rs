//! Evaluates the large-κ smallness budget for fixed data across κ, and the
//! closed-form 2D bound on the limit functional.

use bmhd::diagnostics::*;
use bmhd::harness::make_initial_data;
use bmhd::lp::DyadicProfile;
use bmhd::models::PhysParams;
use bmhd::spectral::GridSpec;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let g = GridSpec::new(64, 2.0 * PI)?;
    let profile = DyadicProfile::new(&g);
    let (mut comp, inc) = make_initial_data("taylor-green-mhd", 0.05, 0, &g)?;
    comp.a = comp.a.scale(0.0);
    let base = PhysParams::new(1.0, 1.0, 1.0, 1.4)?;
    let m = compute_m_2d_bound(&profile, &inc, &base, 1.0)?;
    println!("2D bound on M with C = 1: {m:.4}");

    let opts = BudgetOptions::default();
    for e in [2, 6, 10, 14, 18, 22] {
        let mut p = base;
        p.set_kappa(10f64.powi(e));
        let b = compute_budget(&profile, &comp, &inc, &p, m, &opts)?;
        println!(
            "kappa 1e{e:<2}  D0 {:.3e}  delta0 {:.3e}  checks {} / {}",
            b.d0, b.delta0, b.kappa_check, b.delta_check
        );
    }
    Ok(())
}
