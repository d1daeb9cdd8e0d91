//! Empirical constants of the product, interpolation and composition
//! estimates on random band-limited data.

use bmhd::harness::{lemma_study, random_bandlimited_scalar, RANDOM_KMAX};
use bmhd::lp::*;
use bmhd::spectral::GridSpec;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() -> bmhd::Result<()> {
    let g = GridSpec::new(64, 2.0 * PI)?;
    let p = DyadicProfile::new(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let f = random_bandlimited_scalar(&g, &mut rng, RANDOM_KMAX).scale(0.1);
    let h = random_bandlimited_scalar(&g, &mut rng, RANDOM_KMAX).scale(0.1);

    println!("product       (s1, s2) = (0.5, 0.5): {:.4}", check_product(&p, &f, &h, 0.5, 0.5)?);
    println!("interpolation (0, 1, 1/2):           {:.4}", check_interpolation(&p, &f, 0.0, 1.0, 0.5)?);
    println!("composition   s = 1, gamma = 1.4:    {:.4}", check_composition(&p, &f, 1.0, 1.4)?);

    let pairs = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20);
    let s = lemma_study(pairs, 2024)?;
    println!(
        "{pairs} pairs: max ratios {:.4} / {:.4} / {:.4}, scale defect {:.1e}, n=64 vs n=128 {:.1e}",
        s.product_max, s.interpolation_max, s.composition_max, s.scale_defect, s.grid_discrepancy
    );
    Ok(())
}
