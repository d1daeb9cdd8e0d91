use bmhd::lp::*;
use bmhd::spectral::*;
use bmhd::Error;
use proptest::prelude::*;
use std::f64::consts::PI;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, 2.0 * PI).unwrap()
}

fn random_field(g: &GridSpec, seed: u64, kmax: i64) -> SpectralField {
    // small LCG so the field does not depend on the crate's own generator
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
    };
    let mut f = SpectralField::zeros(g);
    for k0 in -kmax..=kmax {
        for k1 in 0..=kmax {
            if k1 == 0 && k0 <= 0 {
                continue;
            }
            f.set_mode(k0, k1, Complex64::new(next(), next()));
        }
    }
    f
}

#[test]
fn modes_inside_a_single_annulus_give_exact_besov_norms() {
    // |ξ| = 3 sits where φ(ξ/2) = 1, |ξ| = 11 where φ(ξ/8) = 1
    let g = grid(32);
    let p = DyadicProfile::new(&g);
    let f = SpectralField::from_samples(&g, &sample_fn(&g, |x, y| (3.0 * x).cos() + 2.0 * (11.0 * y).sin()))
        .unwrap();
    let unit = PI * 2f64.sqrt();
    for s in [-0.5, 0.0, 1.0, 1.5] {
        let want = 2f64.powf(s) * unit + 8f64.powf(s) * 2.0 * unit;
        let got = b21(&p, &f, s);
        assert!((got - want).abs() < 1e-12 * want, "s={s}: {got} vs {want}");
    }
}

#[test]
fn single_mode_between_annuli_has_l2_besov_zero_norm() {
    // weights of one mode sum to one, so the ℓ¹ sum at s = 0 is the L² norm
    let g = grid(64);
    let p = DyadicProfile::new(&g);
    for k in [1i64, 2, 4, 5, 7, 16, 20] {
        let mut f = SpectralField::zeros(&g);
        f.set_mode(k, 0, Complex64::new(0.3, -0.1));
        assert!((b21(&p, &f, 0.0) - f.l2_norm()).abs() < 1e-14);
    }
}

#[test]
fn besov_two_two_is_equivalent_to_sobolev() {
    let g = grid(64);
    let p = DyadicProfile::new(&g);
    let w = Wavenumbers::new(&g);
    for seed in 0..5 {
        let f = random_field(&g, seed, 20);
        for s in [0.5, 1.0, 2.0] {
            let b = besov_norm(&p, &f, BesovIndex::new(s, 2.0, SumExponent::Two).unwrap()).unwrap();
            let h = f
                .apply_multiplier(|idx, _, _| {
                    let r = w.full[idx / 64].hypot(w.full[idx % 64]);
                    r.powf(s).into()
                })
                .l2_norm();
            let ratio = b / h;
            assert!(ratio >= 0.5f64.sqrt() * (3.0f64 / 8.0).powf(s) && ratio <= (4.0f64 / 3.0).powf(s));
        }
    }
}

#[test]
fn sum_exponents_are_ordered() {
    let g = grid(32);
    let p = DyadicProfile::new(&g);
    let f = random_field(&g, 3, 10);
    let n = |r| besov_norm(&p, &f, BesovIndex::new(0.5, 2.0, r).unwrap()).unwrap();
    assert!(n(SumExponent::Infinity) <= n(SumExponent::Two));
    assert!(n(SumExponent::Two) <= n(SumExponent::One));
}

#[test]
fn only_p_two_is_accepted() {
    assert!(matches!(
        BesovIndex::new(0.0, 1.0, SumExponent::One),
        Err(Error::InvalidBesovIndex(_))
    ));
}

#[test]
fn low_high_split_covers_field_and_follows_threshold() {
    let g = grid(64);
    let p = DyadicProfile::new(&g);
    let f = random_field(&g, 9, 20);
    for kappa in [1e-6, 0.05, 0.3, 1.0, 1e3] {
        let (lo, hi) = low_high_split(&p, &f, kappa);
        assert!((&lo + &hi).max_abs_diff(&f.without_mean()) < 1e-14);
    }
    let (lo, _) = low_high_split(&p, &f, 1e3);
    assert_eq!(lo.max_coeff(), 0.0);
    let (_, hi) = low_high_split(&p, &f, 1e-6);
    assert_eq!(hi.max_coeff(), 0.0);
}

#[test]
fn lowpass_plus_remaining_blocks_reconstructs() {
    let g = grid(32);
    let p = DyadicProfile::new(&g);
    let f = random_field(&g, 1, 10);
    let j = 2;
    let mut rest = lp_lowpass(&p, &f, j);
    for k in j..=p.j_max() {
        rest = &rest + &lp_block(&p, &f, k);
    }
    assert!(rest.max_abs_diff(&f.without_mean()) < 1e-14);
}

#[test]
fn interpolation_constant_is_one() {
    // Hölder on the ℓ¹ sequence of block norms
    let g = grid(64);
    let p = DyadicProfile::new(&g);
    for seed in 0..20 {
        let f = random_field(&g, seed, 12);
        for theta in [0.1, 0.5, 0.9] {
            let r = check_interpolation(&p, &f, -0.5, 1.5, theta).unwrap();
            assert!(r <= 1.0 + 1e-12 && r > 0.0);
        }
    }
}

#[test]
fn composition_ratio_tends_to_linearization() {
    // F(a) ≈ (γ−1)a for small a
    let g = grid(32);
    let p = DyadicProfile::new(&g);
    let f = random_field(&g, 4, 5);
    let small = f.scale(1e-7 / f.max_coeff());
    let r = check_composition(&p, &small, 1.0, 1.4).unwrap();
    assert!((r - 0.4).abs() < 1e-5, "{r}");
}

#[test]
fn composition_rejects_vacuum() {
    let g = grid(16);
    let f = SpectralField::from_samples(&g, &sample_fn(&g, |x, _| 1.5 * x.cos())).unwrap();
    let p = DyadicProfile::new(&g);
    assert!(matches!(
        check_composition(&p, &f, 1.0, 1.4),
        Err(Error::SingularDensity { .. })
    ));
}

#[test]
fn product_check_rejects_indices_above_half_dimension() {
    let g = grid(16);
    let p = DyadicProfile::new(&g);
    let f = random_field(&g, 0, 3);
    assert!(check_product(&p, &f, &f, 1.5, 0.5).is_err());
    assert!(check_product(&p, &f, &f, -0.5, 0.5).is_err());
    assert!(check_product(&p, &f, &f, 0.5, 0.5).unwrap().is_finite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn partition_of_unity_on_any_period(n_pow in 3u32..8, period in 0.5f64..50.0) {
        let g = GridSpec::new(1 << n_pow, period).unwrap();
        let p = DyadicProfile::new(&g);
        prop_assert!(p.partition_residual() <= 1e-12);
        prop_assert_eq!(p.overlap_defect(), 0.0);
    }

    #[test]
    fn reconstruction_is_exact(seed in any::<u64>()) {
        let g = grid(32);
        let p = DyadicProfile::new(&g);
        let f = random_field(&g, seed, 15);
        let rec = LpDecomposition::new(&p, &f).reconstruct().unwrap();
        prop_assert!(rec.max_abs_diff(&f.without_mean()) <= 1e-12 * f.max_coeff());
    }

    #[test]
    fn besov_norm_is_a_seminorm(a in any::<u64>(), b in any::<u64>(), c in -5.0f64..5.0, s in -1.0f64..2.0) {
        let g = grid(32);
        let p = DyadicProfile::new(&g);
        let (f, h) = (random_field(&g, a, 8), random_field(&g, b, 8));
        let nf = b21(&p, &f, s);
        prop_assert!((b21(&p, &f.scale(c), s) - c.abs() * nf).abs() <= 1e-12 * nf.max(1.0) * c.abs().max(1.0));
        prop_assert!(b21(&p, &(&f + &h), s) <= nf + b21(&p, &h, s) + 1e-12);
        let mean_only = SpectralField::from_samples(&g, &vec![2.0; 1024]).unwrap();
        prop_assert_eq!(b21(&p, &mean_only, s), 0.0);
    }

    #[test]
    fn product_ratio_is_bilinear_invariant(a in any::<u64>(), b in any::<u64>(), c in 0.01f64..100.0) {
        let g = grid(32);
        let p = DyadicProfile::new(&g);
        let (f, h) = (random_field(&g, a, 4), random_field(&g, b, 4));
        let r = check_product(&p, &f, &h, 0.5, 0.5).unwrap();
        let rs = check_product(&p, &f.scale(c), &h.scale(1.0 / c), 0.5, 0.5).unwrap();
        prop_assert!((r - rs).abs() <= 1e-10 * r);
    }
}
