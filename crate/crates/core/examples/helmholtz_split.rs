//! Splits a velocity field into its solenoidal and gradient parts and checks
//! the projector identities.

use bmhd::spectral::*;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let g = GridSpec::new(64, 2.0 * PI)?;
    let ux = sample_fn(&g, |x, y| (2.0 * y).sin() + 0.3 * x.cos());
    let uy = sample_fn(&g, |x, y| x.sin() * y.cos());
    let v = VectorField::from_components(vec![
        SpectralField::from_samples(&g, &ux)?,
        SpectralField::from_samples(&g, &uy)?,
    ])?;

    let (p, q) = helmholtz_split(&v);
    println!("|v|  = {:.6}", v.l2_norm());
    println!("|Pv| = {:.6}  |Qv| = {:.6}", p.l2_norm(), q.l2_norm());
    println!("max |div Pv|     = {:.2e}", divergence(&p).max_coeff());
    println!("max |P(Pv) - Pv| = {:.2e}", project_p(&p).max_abs_diff(&p));
    println!("max |P(Qv)|      = {:.2e}", project_p(&q).max_coeff());

    // a product needs dealiasing before it is used as a nonlinear term
    let w = product(v.component(0), v.component(1))?;
    println!("u0*u1 mean = {:.6}, dealiased max coeff {:.3e}", w.mean(), dealias(&w).max_coeff());
    Ok(())
}
