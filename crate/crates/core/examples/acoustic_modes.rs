//! Exact per-mode acoustic propagator: how one density mode evolves as the
//! volume viscosity grows, with the slow overdamped branch decaying at about
//! 1/κ.

use bmhd::integrate::{acoustic_exp, mat_vec};
use bmhd::spectral::Complex64;

fn main() {
    let k = 2.0;
    let t = 1.0;
    println!("{:>8} {:>12} {:>12} {:>14}", "kappa", "|a(t)|", "|Qu(t)|", "-log|a|/t");
    for kappa in [0.0, 0.1, 1.0, 10.0, 1e2, 1e4, 1e6] {
        let m = acoustic_exp(k, kappa * k * k, t);
        let w = mat_vec(&m, [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        println!(
            "{kappa:>8.0e} {:>12.6} {:>12.3e} {:>14.6e}",
            w[0].norm(),
            w[1].norm(),
            -w[0].norm().ln() / t
        );
    }
}
