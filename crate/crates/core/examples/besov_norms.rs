//! Dyadic decomposition of a scalar field: block energies, reconstruction and
//! homogeneous Besov norms.

use bmhd::lp::*;
use bmhd::spectral::*;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let g = GridSpec::new(128, 2.0 * PI)?;
    let f = SpectralField::from_samples(
        &g,
        &sample_fn(&g, |x, y| (3.0 * x).cos() + 0.5 * (7.0 * x + 4.0 * y).sin() + 0.1 * (30.0 * y).cos()),
    )?;
    let profile = DyadicProfile::new(&g);
    println!("partition residual {:.1e}", profile.partition_residual());

    for (j, e) in profile.blocks().zip(profile.block_sq_norms(&f)) {
        if e > 1e-20 {
            println!("block {j:>2}: |Delta_j f|^2 = {e:.6}");
        }
    }
    let rec = LpDecomposition::new(&profile, &f).reconstruct().expect("non-empty");
    println!("reconstruction error {:.1e}", rec.max_abs_diff(&f.without_mean()));

    for s in [-0.5, 0.0, 1.0] {
        let r1 = b21(&profile, &f, s);
        let r2 = besov_norm(&profile, &f, BesovIndex::new(s, 2.0, SumExponent::Two)?)?;
        let ri = besov_norm(&profile, &f, BesovIndex::new(s, 2.0, SumExponent::Infinity)?)?;
        println!("s = {s:>4}: B^s_(2,1) {r1:.5}  B^s_(2,2) {r2:.5}  B^s_(2,inf) {ri:.5}");
    }

    let (lo, hi) = low_high_split(&profile, &f, 0.05);
    println!("low/high split at kappa = 0.05: {:.5} + {:.5}", lo.l2_norm(), hi.l2_norm());
    Ok(())
}
