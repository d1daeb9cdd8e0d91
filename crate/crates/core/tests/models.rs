use bmhd::models::*;
use bmhd::spectral::*;
use std::f64::consts::PI;

fn grid() -> GridSpec {
    GridSpec::new(32, 2.0 * PI).unwrap()
}

fn scalar(g: &GridSpec, f: impl Fn(f64, f64) -> f64) -> SpectralField {
    SpectralField::from_samples(g, &sample_fn(g, f)).unwrap()
}

fn vector(g: &GridSpec, f0: impl Fn(f64, f64) -> f64, f1: impl Fn(f64, f64) -> f64) -> VectorField {
    VectorField::from_components(vec![scalar(g, f0), scalar(g, f1)]).unwrap()
}

fn solenoidal(g: &GridSpec, psi: impl Fn(f64, f64) -> f64) -> VectorField {
    perp_gradient(&scalar(g, psi))
}

/// Physical samples of a vector field and of its first derivatives.
struct Pt {
    v: [Vec<f64>; 2],
    // d[i][j] = ∂_j v_i
    d: [[Vec<f64>; 2]; 2],
}

fn pt(v: &VectorField) -> Pt {
    let s = |f: &SpectralField| f.to_samples().unwrap();
    let c = |i: usize| v.component(i);
    Pt {
        v: [s(c(0)), s(c(1))],
        d: [
            [s(&derivative(c(0), 0).unwrap()), s(&derivative(c(0), 1).unwrap())],
            [s(&derivative(c(1), 0).unwrap()), s(&derivative(c(1), 1).unwrap())],
        ],
    }
}

// (w·∇)z at point p, component i
fn adv(w: &Pt, z: &Pt, i: usize, p: usize) -> f64 {
    w.v[0][p] * z.d[i][0][p] + w.v[1][p] * z.d[i][1][p]
}

fn field_of(g: &GridSpec, comps: [Vec<f64>; 2]) -> VectorField {
    let [x, y] = comps;
    dealias_vec(&VectorField::from_components(vec![
        SpectralField::from_samples(g, &x).unwrap(),
        SpectralField::from_samples(g, &y).unwrap(),
    ])
    .unwrap())
}

struct Sample {
    comp: CompressibleState,
    inc: IncompressibleState,
}

fn sample(eps: f64) -> Sample {
    let g = grid();
    let uu = solenoidal(&g, |x, y| eps * (x.sin() * y.cos() + 0.3 * (2.0 * y).sin()));
    let bb = solenoidal(&g, |x, y| eps * (0.5 * (x + y).cos() - 0.2 * (2.0 * x).sin()));
    let v = &solenoidal(&g, |x, y| eps * 0.4 * (x - 2.0 * y).sin())
        + &gradient(&scalar(&g, |x, y| eps * (0.3 * (2.0 * x).cos() + 0.2 * (x + y).sin())));
    let c = solenoidal(&g, |x, y| eps * 0.25 * (3.0 * x).cos() * y.sin());
    Sample {
        comp: CompressibleState {
            a: scalar(&g, |x, y| eps * (0.5 * x.cos() + 0.3 * (x + 2.0 * y).sin())),
            u: &uu + &v,
            b: &bb + &c,
            t: 0.0,
        },
        inc: IncompressibleState { u: uu, b: bb, t: 0.0 },
    }
}

struct Parts {
    a: Vec<f64>,
    k: Vec<f64>,
    grad_a: Pt,
    v: Pt,
    pv: Pt,
    qv: Pt,
    u: Pt,
    b: Pt,
    c: Pt,
    div_qv: Vec<f64>,
}

fn parts(s: &Sample, gamma: f64) -> Parts {
    let v = &s.comp.u - &s.inc.u;
    let c = &s.comp.b - &s.inc.b;
    let (pv, qv) = helmholtz_split(&v);
    let a = s.comp.a.to_samples().unwrap();
    Parts {
        k: a.iter().map(|x| (1.0 + x).powf(gamma - 1.0) - 1.0).collect(),
        a,
        grad_a: pt(&gradient(&s.comp.a)),
        div_qv: divergence(&qv).to_samples().unwrap(),
        v: pt(&v),
        pv: pt(&pv),
        qv: pt(&qv),
        u: pt(&s.inc.u),
        b: pt(&s.inc.b),
        c: pt(&c),
    }
}

fn sum_pt(x: &Pt, y: &Pt) -> Pt {
    let add = |a: &Vec<f64>, b: &Vec<f64>| a.iter().zip(b).map(|(p, q)| p + q).collect::<Vec<_>>();
    Pt {
        v: [add(&x.v[0], &y.v[0]), add(&x.v[1], &y.v[1])],
        d: [
            [add(&x.d[0][0], &y.d[0][0]), add(&x.d[0][1], &y.d[0][1])],
            [add(&x.d[1][0], &y.d[1][0]), add(&x.d[1][1], &y.d[1][1])],
        ],
    }
}

fn oracle_r1(s: &Sample, gamma: f64) -> VectorField {
    let p = parts(s, gamma);
    let w = sum_pt(&p.v, &p.u);
    let bc = sum_pt(&p.b, &p.c);
    let n = p.a.len();
    let mut out = [vec![0.0; n], vec![0.0; n]];
    for (i, o) in out.iter_mut().enumerate() {
        for q in 0..n {
            let r = 1.0 + p.a[q];
            let grad_half_sq = bc.v[0][q] * bc.d[0][i][q] + bc.v[1][q] * bc.d[1][i][q];
            o[q] = r * adv(&w, &p.pv, i, q) + r * adv(&w, &p.u, i, q) + p.a[q] * adv(&w, &p.qv, i, q)
                + p.k[q] * p.grad_a.v[i][q]
                - adv(&bc, &bc, i, q)
                + grad_half_sq;
        }
    }
    field_of(s.comp.grid(), out)
}

fn oracle_r2(s: &Sample, gamma: f64) -> VectorField {
    let p = parts(s, gamma);
    let w = sum_pt(&p.v, &p.u);
    let bc = sum_pt(&p.b, &p.c);
    let n = p.a.len();
    let mut out = [vec![0.0; n], vec![0.0; n]];
    for (i, o) in out.iter_mut().enumerate() {
        for q in 0..n {
            let r = 1.0 + p.a[q];
            o[q] = r * adv(&w, &p.qv, i, q)
                + r * adv(&p.v, &p.u, i, q)
                + p.a[q] * adv(&w, &p.pv, i, q)
                + p.a[q] * adv(&p.u, &p.u, i, q)
                - adv(&bc, &p.c, i, q)
                - adv(&p.c, &p.b, i, q);
        }
    }
    field_of(s.comp.grid(), out)
}

fn oracle_r3(s: &Sample, gamma: f64) -> VectorField {
    let p = parts(s, gamma);
    let bc = sum_pt(&p.b, &p.c);
    let n = p.a.len();
    let mut out = [vec![0.0; n], vec![0.0; n]];
    for (i, o) in out.iter_mut().enumerate() {
        for q in 0..n {
            o[q] = p.div_qv[q] * p.b.v[i][q] + p.div_qv[q] * p.c.v[i][q] + adv(&p.v, &p.b, i, q)
                - adv(&bc, &p.v, i, q)
                - adv(&p.c, &p.u, i, q);
        }
    }
    field_of(s.comp.grid(), out)
}

fn params() -> PhysParams {
    PhysParams::new(0.3, 2.0, 0.2, 1.4).unwrap()
}

#[test]
fn remainders_match_duplicate_evaluator() {
    let s = sample(0.4);
    let p = params();
    let e1 = remainder_r1(&s.comp, &s.inc, &p).unwrap().max_abs_diff(&oracle_r1(&s, p.gamma));
    let e2 = remainder_r2(&s.comp, &s.inc, &p).unwrap().max_abs_diff(&oracle_r2(&s, p.gamma));
    let e3 = remainder_r3(&s.comp, &s.inc, &p).unwrap().max_abs_diff(&oracle_r3(&s, p.gamma));
    assert!(e1 < 1e-12 && e2 < 1e-12 && e3 < 1e-12, "{e1} {e2} {e3}");
}

#[test]
fn remainders_at_exact_agreement() {
    let mut s = sample(0.4);
    let g = grid();
    s.comp.a = SpectralField::zeros(&g);
    s.comp.u = s.inc.u.clone();
    s.comp.b = s.inc.b.clone();
    let p = params();
    assert!(remainder_r2(&s.comp, &s.inc, &p).unwrap().max_coeff() < 1e-15);
    assert!(remainder_r3(&s.comp, &s.inc, &p).unwrap().max_coeff() < 1e-15);
    // R1 = U·∇U − B·∇B + ½∇|B|²
    let u = pt(&s.inc.u);
    let b = pt(&s.inc.b);
    let n = g.len();
    let mut want = [vec![0.0; n], vec![0.0; n]];
    for (i, w) in want.iter_mut().enumerate() {
        for q in 0..n {
            w[q] = adv(&u, &u, i, q) - adv(&b, &b, i, q) + b.v[0][q] * b.d[0][i][q] + b.v[1][q] * b.d[1][i][q];
        }
    }
    let r1 = remainder_r1(&s.comp, &s.inc, &p).unwrap();
    assert!(r1.max_abs_diff(&field_of(&g, want)) < 1e-14);
}

#[test]
fn r3_reduces_to_minus_c_grad_v() {
    let g = grid();
    let v = solenoidal(&g, |x, y| 0.3 * (x + y).sin());
    let c = solenoidal(&g, |x, y| 0.2 * (2.0 * x).cos() * y.cos());
    let comp = CompressibleState {
        a: SpectralField::zeros(&g),
        u: v.clone(),
        b: c.clone(),
        t: 0.0,
    };
    let inc = IncompressibleState::zeros(&g);
    let r3 = remainder_r3(&comp, &inc, &params()).unwrap();
    let (vp, cp) = (pt(&v), pt(&c));
    let mut want = [vec![0.0; g.len()], vec![0.0; g.len()]];
    for (i, w) in want.iter_mut().enumerate() {
        for q in 0..g.len() {
            w[q] = -adv(&cp, &vp, i, q);
        }
    }
    assert!(r3.max_abs_diff(&field_of(&g, want)) < 1e-14);
}

#[test]
fn r2_quadratic_part_by_richardson() {
    let p = params();
    let scaled = |eps: f64| {
        let s = sample(eps);
        remainder_r2(&s.comp, &s.inc, &p).unwrap().scale(1.0 / (eps * eps))
    };
    let (r1, r2, r3) = (scaled(1e-2), scaled(5e-3), scaled(2.5e-3));
    let ratio = r1.max_abs_diff(&r2) / r2.max_abs_diff(&r3);
    assert!((ratio - 2.0).abs() < 0.05, "{ratio}");
}

#[test]
fn without_field_reduces_to_barotropic_navier_stokes() {
    let g = grid();
    let p = params();
    let s = sample(0.3);
    let state = CompressibleState {
        a: s.comp.a.clone(),
        u: s.comp.u.clone(),
        b: VectorField::zeros(&g),
        t: 0.0,
    };
    let r = rhs_compressible(&state, &p).unwrap();
    assert_eq!(r.b.max_coeff(), 0.0);

    // conservative evaluation: a_t = −div(ρu), u·∇u = div(u⊗u) − u div u
    let a = state.a.to_samples().unwrap();
    let u = pt(&state.u);
    let n = g.len();
    let rho_u: Vec<SpectralField> = (0..2)
        .map(|i| SpectralField::from_samples(&g, &(0..n).map(|q| (1.0 + a[q]) * u.v[i][q]).collect::<Vec<_>>()).unwrap())
        .collect();
    let da = (&derivative(&rho_u[0], 0).unwrap() + &derivative(&rho_u[1], 1).unwrap()).scale(-1.0);
    assert!(dealias(&da).max_abs_diff(&r.a) < 1e-14);

    let uu = |i: usize, j: usize| {
        SpectralField::from_samples(&g, &(0..n).map(|q| u.v[i][q] * u.v[j][q]).collect::<Vec<_>>()).unwrap()
    };
    let div_u = divergence(&state.u).to_samples().unwrap();
    let grad_a = pt(&gradient(&state.a));
    let lap = laplacian_vec(&state.u);
    let gdiv = gradient(&divergence(&state.u));
    let mut want = [vec![0.0; n], vec![0.0; n]];
    for (i, w) in want.iter_mut().enumerate() {
        let flux = (&derivative(&uu(i, 0), 0).unwrap() + &derivative(&uu(i, 1), 1).unwrap())
            .to_samples()
            .unwrap();
        let lap_i = lap.component(i).to_samples().unwrap();
        let gdiv_i = gdiv.component(i).to_samples().unwrap();
        for q in 0..n {
            let rho: f64 = 1.0 + a[q];
            let visc = p.mu * lap_i[q] + (p.mu + p.lambda) * gdiv_i[q];
            w[q] = -(flux[q] - u.v[i][q] * div_u[q]) - rho.powf(p.gamma - 1.0) * grad_a.v[i][q] + visc / rho;
        }
    }
    let err = r.u.max_abs_diff(&field_of(&g, want));
    assert!(err < 1e-12, "{err}");
}

#[test]
fn mass_and_magnetic_constraint_are_preserved_by_the_rhs() {
    let s = sample(0.4);
    let r = rhs_compressible(&s.comp, &params()).unwrap();
    assert!(r.a.mode(0, 0).norm() < 1e-16);
    let rel = divergence(&r.b).max_coeff() / r.b.max_coeff();
    assert!(rel < 1e-10, "{rel}");
}

#[test]
fn linearized_acoustic_mode_matches_symbol() {
    let g = grid();
    let p = PhysParams::with_kappa(0.3, 7.0, 0.2, 1.4).unwrap();
    let eps = 1e-6;
    let (k0, k1) = (2i64, 1i64);
    let km = ((k0 * k0 + k1 * k1) as f64).sqrt();
    let (e0, e1) = (k0 as f64 / km, k1 as f64 / km);
    let ah = Complex64::new(0.3, -0.2) * eps;
    let qh = Complex64::new(-0.1, 0.4) * eps;
    let mut st = CompressibleState::zeros(&g);
    st.a.set_mode(k0, k1, ah);
    st.u.component_mut(0).set_mode(k0, k1, qh * e0);
    st.u.component_mut(1).set_mode(k0, k1, qh * e1);
    let r = rhs_compressible(&st, &p).unwrap();
    let i = Complex64::new(0.0, 1.0);
    let da = -i * km * qh;
    let dq = -i * km * ah - p.kappa() * km * km * qh;
    let got_q = e0 * r.u.component(0).mode(k0, k1) + e1 * r.u.component(1).mode(k0, k1);
    assert!((r.a.mode(k0, k1) - da).norm() < 1e-8 * eps.max(da.norm()));
    assert!((got_q - dq).norm() < 1e-5 * dq.norm());
    assert!((got_q - dq).norm() < 1e-8);
}

#[test]
fn taylor_green_is_an_exact_decaying_solution() {
    let g = grid();
    let p = params();
    let u = vector(&g, |x, y| x.sin() * y.cos(), |x, y| -x.cos() * y.sin());
    let st = IncompressibleState {
        u: u.clone(),
        b: VectorField::zeros(&g),
        t: 0.0,
    };
    let r = rhs_incompressible(&st, &p).unwrap();
    assert!(r.u.max_abs_diff(&u.scale(-2.0 * p.mu)) < 1e-10);
}

#[test]
fn aligned_fields_cancel_in_the_induction_equation() {
    let g = grid();
    let p = params();
    let w = solenoidal(&g, |x, y| x.sin() * (2.0 * y).cos() + 0.4 * (x + y).cos());
    let st = IncompressibleState {
        u: w.clone(),
        b: w.clone(),
        t: 0.0,
    };
    let r = rhs_incompressible(&st, &p).unwrap();
    assert!(r.b.max_abs_diff(&laplacian_vec(&w).scale(p.nu)) < 1e-13);
}

#[test]
fn incompressible_rhs_is_solenoidal_and_dissipates_energy() {
    let s = sample(0.5);
    let p = params();
    let r = rhs_incompressible(&s.inc, &p).unwrap();
    assert!(divergence(&r.u).max_coeff() < 1e-12);
    let rate = energy_rate(&s.inc, &r);
    let want = -p.mu * gradient_sq_norm(&s.inc.u) - p.nu * gradient_sq_norm(&s.inc.b);
    assert!((rate - want).abs() < 1e-8 * want.abs(), "{rate} {want}");
}

#[test]
fn pressure_deviation_values() {
    let g = grid();
    let a = SpectralField::from_samples(&g, &vec![0.1; g.len()]).unwrap();
    let k = k_of_a(&a, &params()).unwrap().to_samples().unwrap();
    assert!(k.iter().all(|x| (x - (1.1f64.powf(0.4) - 1.0)).abs() < 1e-14));
    let p2 = PhysParams::new(0.3, 2.0, 0.2, 2.0).unwrap();
    let a = scalar(&g, |x, y| 0.3 * (x + y).sin());
    assert!(k_of_a(&a, &p2).unwrap().max_abs_diff(&a) < 1e-15);
    assert!(k_of_a(&SpectralField::zeros(&g), &p2).unwrap().max_coeff() == 0.0);
}

#[test]
fn validation_flags_each_violation() {
    let g = grid();
    let s = sample(0.2);
    assert!(validate_state(&s.comp, s.comp.a.mean()).unwrap().passed());

    let mut bad = s.comp.clone();
    bad.b = &bad.b + &gradient(&scalar(&g, |x, _| 0.1 * x.cos()));
    let r = validate_state(&bad, bad.a.mean()).unwrap();
    assert!(!r.div_b_ok && r.density_ok);

    let mut vac = s.comp.clone();
    vac.a = scalar(&g, |x, _| -1.5 * x.cos().max(0.0).powi(2));
    assert!(!validate_state(&vac, vac.a.mean()).unwrap().density_ok);

    let mut drift = s.comp.clone();
    drift.a.set_mean(1e-9);
    assert!(!validate_state(&drift, 0.0).unwrap().mean_ok);
}

#[test]
fn parameters_enforce_strong_parabolicity() {
    assert!(PhysParams::new(-1.0, 1.0, 0.1, 1.4).is_err());
    assert!(PhysParams::new(0.5, -1.5, 0.1, 1.4).is_err());
    assert!(PhysParams::new(0.5, 1.0, 0.0, 1.4).is_err());
    assert!(PhysParams::new(0.5, 1.0, 0.1, 1.0).is_err());
    let p = PhysParams::with_kappa(0.5, 100.0, 0.1, 1.4).unwrap();
    assert!((p.kappa() - 100.0).abs() < 1e-12);
    let law = p.pressure();
    assert!((law.derivative(1.0) - 1.0).abs() < 1e-15 && law.k(0.0) == 0.0);
}
