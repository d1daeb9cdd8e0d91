use bmhd::harness::make_initial_data;
use bmhd::integrate::*;
use bmhd::models::*;
use bmhd::spectral::*;
use std::f64::consts::PI;

mod common;
use common::*;

fn grid(n: usize) -> GridSpec {
    GridSpec::new(n, 2.0 * PI).unwrap()
}

fn mode_state(g: &GridSpec, k: (i64, i64), x: [Complex64; 3]) -> CompressibleState {
    let mut s = CompressibleState::zeros(g);
    s.a.set_mode(k.0, k.1, x[0]);
    s.u.component_mut(0).set_mode(k.0, k.1, x[1]);
    s.u.component_mut(1).set_mode(k.0, k.1, x[2]);
    s
}

fn propagator_error(kappa: f64, k: (i64, i64), dt: f64) -> f64 {
    let g = grid(16);
    let p = PhysParams::with_kappa(0.5, kappa, 0.3, 1.4).unwrap();
    let coeffs = LinearCoefficients::physical(&p);
    let prop = LinearPropagator::new(&g, coeffs, (p.mu, p.nu), dt);
    let x = [
        Complex64::new(0.7, -0.2),
        Complex64::new(0.1, 0.4),
        Complex64::new(-0.3, 0.25),
    ];
    let s = mode_state(&g, k, x);
    let oracle = phi_oracle(&cartesian_generator(k.0 as f64, k.1 as f64, &coeffs), dt);
    let kinds = [PropagatorKind::Exp, PropagatorKind::Phi1, PropagatorKind::Phi2];
    let mut worst: f64 = 0.0;
    for (kind, m) in kinds.iter().zip(&oracle) {
        let out = propagate_compressible_as(&prop, *kind, &s);
        let got = [
            out.a.mode(k.0, k.1),
            out.u.component(0).mode(k.0, k.1),
            out.u.component(1).mode(k.0, k.1),
        ];
        for r in 0..3 {
            let want: Complex64 = (0..3).map(|c| m[r][c] * x[c]).sum();
            worst = worst.max((got[r] - want).norm());
        }
    }
    worst
}

#[test]
fn propagator_tables_match_dense_oracle_across_stiffness() {
    for kappa in [1.0, 1e2, 1e4, 1e6] {
        for k in [(1, 0), (1, 2), (3, -4), (5, 5)] {
            for dt in [1e-3, 1e-2, 0.1] {
                let e = propagator_error(kappa, k, dt);
                assert!(e < 1e-12, "kappa={kappa} k={k:?} dt={dt}: {e}");
            }
        }
    }
}

#[test]
fn oracle_example_kappa_100_unit_mode() {
    assert!(propagator_error(100.0, (1, 0), 0.01) < 1e-12);
}

#[test]
fn exact_acoustic_blocks_against_oracle_directly() {
    for (k, c, t) in [(1.0, 0.0, 0.3), (2.0, 4.0, 0.5), (3.0, 1e6, 0.01), (1.0, 2.0, 1.0)] {
        let g: Dm = acoustic_generator(k, c).iter().map(|r| r.iter().map(|x| Dd::from(*x)).collect()).collect();
        let oracle = phi_oracle(&g, t);
        for order in 0..3 {
            let m = acoustic_function(order, k, c, t);
            let w = if order == 0 { 1.0 } else { t };
            for i in 0..2 {
                for j in 0..2 {
                    let err = (m[i][j] * w - oracle[order][i][j]).norm();
                    assert!(err < 1e-12, "order {order} k={k} c={c}: {err}");
                }
            }
        }
    }
}

#[test]
fn semigroup_property() {
    let g = grid(16);
    let p = PhysParams::with_kappa(0.2, 50.0, 0.1, 1.4).unwrap();
    let c = LinearCoefficients::physical(&p);
    let s = mode_state(
        &g,
        (2, 1),
        [Complex64::new(0.5, 0.1), Complex64::new(0.2, 0.0), Complex64::new(0.0, -0.3)],
    );
    let prop = |dt| LinearPropagator::new(&g, c, (p.mu, p.nu), dt);
    let two = propagate_compressible(&prop(0.013), &propagate_compressible(&prop(0.02), &s));
    let one = propagate_compressible(&prop(0.033), &s);
    assert!(two.a.max_abs_diff(&one.a) < 1e-12 && two.u.max_abs_diff(&one.u) < 1e-12);
}

#[test]
fn undamped_acoustics_are_time_reversible() {
    let g = grid(16);
    let c = LinearCoefficients {
        shear: 0.0,
        bulk: 0.0,
        resistivity: 0.0,
    };
    let s = mode_state(
        &g,
        (3, -1),
        [Complex64::new(0.5, 0.1), Complex64::new(0.2, 0.0), Complex64::new(0.0, -0.3)],
    );
    let mut x = s.clone();
    let fwd = LinearPropagator::new(&g, c, (0.0, 0.0), 0.05);
    let bwd = LinearPropagator::new(&g, c, (0.0, 0.0), -0.05);
    for _ in 0..100 {
        x = propagate_compressible(&fwd, &x);
    }
    for _ in 0..100 {
        x = propagate_compressible(&bwd, &x);
    }
    assert!(x.a.max_abs_diff(&s.a) < 1e-10 && x.u.max_abs_diff(&s.u) < 1e-10);
}

#[test]
fn acoustic_block_is_dissipative_for_any_kappa() {
    for c in [0.0, 1.0, 1e2, 1e4, 1e6] {
        for k in [0.5, 1.0, 7.0, 60.0] {
            for t in [1e-4, 1e-2, 1.0] {
                let m = acoustic_exp(k, c * k * k, t);
                // ‖M‖₂² is the largest eigenvalue of M*M
                let h = |i: usize, j: usize| m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let (p, q, r) = (h(0, 0).re, h(1, 1).re, h(0, 1).norm());
                let top = 0.5 * (p + q) + (0.25 * (p - q).powi(2) + r * r).sqrt();
                assert!(top <= 1.0 + 1e-12, "c={c} k={k} t={t}: {top}");
            }
        }
    }
}

fn magnetic_mode(g: &GridSpec, amp: f64) -> VectorField {
    let psi = SpectralField::from_samples(g, &sample_fn(g, |x, y| amp * (2.0 * x + y).cos())).unwrap();
    perp_gradient(&psi)
}

#[test]
fn heat_solution_of_a_magnetic_mode_is_exact() {
    let g = grid(32);
    let p = PhysParams::new(0.1, 1.0, 0.3, 1.4).unwrap();
    let b0 = magnetic_mode(&g, 0.2);
    let mut s = IncompressibleState {
        u: VectorField::zeros(&g),
        b: b0.clone(),
        t: 0.0,
    };
    for _ in 0..100 {
        s = step_incompressible(&s, &p, 0.01).unwrap();
    }
    assert!((s.t - 1.0).abs() < 1e-12);
    assert!(s.b.max_abs_diff(&b0.scale((-p.nu * 5.0).exp())) < 1e-8);
    assert!(s.u.max_coeff() < 1e-15);
}

#[test]
fn weak_magnetic_mode_decays_by_heat_in_compressible_system() {
    // magnetic pressure drives a flow of size amp², feeding back at amp³
    let g = grid(32);
    let p = PhysParams::new(0.1, 1.0, 0.3, 1.4).unwrap();
    let mut s = CompressibleState::zeros(&g);
    s.b = magnetic_mode(&g, 1e-3);
    let b0 = s.b.clone();
    for _ in 0..100 {
        s = step_compressible(&s, &p, 0.01).unwrap();
    }
    assert!(s.b.max_abs_diff(&b0.scale((-p.nu * 5.0).exp())) < 1e-8);
}

#[test]
fn shear_flow_decays_exactly_in_both_systems() {
    let g = grid(32);
    let p = PhysParams::new(0.2, 1.0, 0.3, 1.4).unwrap();
    let u0 = VectorField::from_components(vec![
        SpectralField::from_samples(&g, &sample_fn(&g, |_, y| 0.5 * (3.0 * y).sin())).unwrap(),
        SpectralField::zeros(&g),
    ])
    .unwrap();
    let mut inc = IncompressibleState {
        u: u0.clone(),
        b: VectorField::zeros(&g),
        t: 0.0,
    };
    let mut comp = CompressibleState::zeros(&g);
    comp.u = u0.clone();
    for _ in 0..100 {
        inc = step_incompressible(&inc, &p, 0.01).unwrap();
        comp = step_compressible(&comp, &p, 0.01).unwrap();
    }
    let want = u0.scale((-p.mu * 9.0).exp());
    assert!(inc.u.max_abs_diff(&want) < 1e-8);
    assert!(comp.u.max_abs_diff(&want) < 1e-8);
}

fn observed_order(kappa: f64) -> (f64, f64) {
    let g = grid(32);
    let p = PhysParams::with_kappa(0.1, kappa, 0.1, 1.4).unwrap();
    let (c0, i0) = make_initial_data("random-bandlimited", 0.03, 11, &g).unwrap();
    let t_end = 0.4;
    let run = |dt: f64| {
        let (mut c, mut i) = (c0.clone(), i0.clone());
        let steps = (t_end / dt).round() as usize;
        for _ in 0..steps {
            c = step_compressible(&c, &p, dt).unwrap();
            i = step_incompressible(&i, &p, dt).unwrap();
        }
        (c, i)
    };
    let (c1, i1) = run(0.02);
    let (c2, i2) = run(0.01);
    let (c4, i4) = run(0.005);
    let ec = |a: &CompressibleState, b: &CompressibleState| {
        a.a.max_abs_diff(&b.a) + a.u.max_abs_diff(&b.u) + a.b.max_abs_diff(&b.b)
    };
    let ei = |a: &IncompressibleState, b: &IncompressibleState| a.u.max_abs_diff(&b.u) + a.b.max_abs_diff(&b.b);
    (
        (ec(&c1, &c2) / ec(&c2, &c4)).log2(),
        (ei(&i1, &i2) / ei(&i2, &i4)).log2(),
    )
}

#[test]
fn both_steppers_are_second_order() {
    for kappa in [1.0, 10.0] {
        let (pc, pi) = observed_order(kappa);
        assert!((1.8..=2.2).contains(&pc), "compressible kappa={kappa}: {pc}");
        assert!((1.8..=2.2).contains(&pi), "incompressible: {pi}");
    }
}

#[test]
fn stiff_runs_stay_accurate_at_coarse_steps() {
    let g = grid(32);
    let (c0, _) = make_initial_data("random-bandlimited", 0.03, 11, &g).unwrap();
    for kappa in [1e2, 1e3, 1e4] {
        let p = PhysParams::with_kappa(0.1, kappa, 0.1, 1.4).unwrap();
        let run = |dt: f64| {
            let mut c = c0.clone();
            for _ in 0..(0.4 / dt).round() as usize {
                c = step_compressible(&c, &p, dt).unwrap();
            }
            c
        };
        let (coarse, fine) = (run(0.04), run(0.0025));
        let err = coarse.a.max_abs_diff(&fine.a) + coarse.u.max_abs_diff(&fine.u);
        assert!(err < 5e-7, "kappa={kappa}: {err}");
    }
}

#[test]
fn adaptive_step_examples() {
    let g = grid(64);
    let p = PhysParams::new(0.1, 1.0, 0.1, 1.4).unwrap();
    let cfg = StepperConfig::new(1.0, 10.0);
    let rest = CompressibleState::zeros(&g);
    let dt = adaptive_dt(&rest, None, &p, &cfg).unwrap();
    assert!((dt - 0.4 * (2.0 * PI / 64.0)).abs() < 1e-15);

    // max|u| = 2 plus sound speed 1
    let mut s = CompressibleState::zeros(&g);
    s.u = VectorField::from_components(vec![
        SpectralField::from_samples(&g, &sample_fn(&g, |x, _| 2.0 * x.cos())).unwrap(),
        SpectralField::zeros(&g),
    ])
    .unwrap();
    let dt = adaptive_dt(&s, None, &p, &cfg).unwrap();
    assert!((dt - 0.4 * (2.0 * PI / 64.0) / 3.0).abs() < 1e-12);
    assert!((dt - 0.0131).abs() < 1e-4);

    let b1 = cfl_bound(&s, None, &p, 0.4).unwrap();
    let mut fast = s.clone();
    fast.u = s.u.scale(2.0);
    let b2 = cfl_bound(&fast, None, &p, 0.4).unwrap();
    // speed 2+1 → 4+1
    assert!((b1 / b2 - 5.0 / 3.0).abs() < 1e-12);

    let near_end = StepperConfig::new(0.1, 0.03);
    assert_eq!(adaptive_dt(&rest, None, &p, &near_end).unwrap(), 0.03);
}

#[test]
fn accumulator_quadrature() {
    let mut acc = NormAccumulator::new();
    for i in 0..=1000 {
        let t = i as f64 * 1e-3;
        acc = accumulate(&acc, t, (-t).exp()).unwrap();
    }
    assert!((acc.l1 - (1.0 - (-1.0f64).exp())).abs() < 1e-6);
    assert_eq!(acc.linf, 1.0);

    let mut c = NormAccumulator::new();
    for i in 0..=10 {
        c.push(i as f64 * 0.3, 2.5).unwrap();
    }
    assert!((c.l1 - 7.5).abs() < 1e-12 && c.linf == 2.5);

    let single = accumulate(&NormAccumulator::new(), 0.0, 4.0).unwrap();
    assert!(single.l1 == 0.0 && single.linf == 4.0);
    assert!(accumulate(&single, -1.0, 1.0).is_err());
    assert!(accumulate(&single, 1.0, f64::NAN).is_err());
}

#[test]
fn stepper_config_validation() {
    assert!(StepperConfig::new(0.0, 1.0).validate().is_err());
    assert!(StepperConfig::new(0.1, f64::NAN).validate().is_err());
    assert!(StepperConfig::new(0.1, 1.0).validate().is_ok());
}
