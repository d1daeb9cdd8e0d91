//! Remainder terms of the equations satisfied by `v = u − U` and `c = b − B`.
//! These are diagnostics: they are evaluated from the two running solutions
//! and never fed back into the evolution.

use super::params::PhysParams;
use super::physical::{
    add, add_jac, advect, axpy_into, grad_samples, half_grad_sq, jacobian, scale_by, to_vec_field,
    vec_samples, zeros, Vec2,
};
use super::state::{CompressibleState, IncompressibleState};
use crate::error::Result;
use crate::spectral::{divergence, helmholtz_split, VectorField};

/// Fields shared by all three remainders, in physical space.
struct Pieces {
    a: Vec<f64>,
    k: Vec<f64>,
    grad_a: Vec2,
    v: Vec2,
    big_u: Vec2,
    big_b: Vec2,
    c: Vec2,
    j_v: super::physical::Jacobian,
    j_pv: super::physical::Jacobian,
    j_qv: super::physical::Jacobian,
    j_u: super::physical::Jacobian,
    j_b: super::physical::Jacobian,
    j_c: super::physical::Jacobian,
    div_qv: Vec<f64>,
}

fn pieces(
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<Pieces> {
    comp.a.check_same_grid(inc.u.component(0))?;
    let law = params.pressure();
    let v = &comp.u - &inc.u;
    let c = &comp.b - &inc.b;
    let (pv, qv) = helmholtz_split(&v);
    let a = comp.a.to_samples()?;
    let k = a.iter().map(|&x| law.k(x)).collect();
    Ok(Pieces {
        k,
        grad_a: grad_samples(&comp.a)?,
        v: vec_samples(&v)?,
        big_u: vec_samples(&inc.u)?,
        big_b: vec_samples(&inc.b)?,
        c: vec_samples(&c)?,
        j_v: jacobian(&v)?,
        j_pv: jacobian(&pv)?,
        j_qv: jacobian(&qv)?,
        j_u: jacobian(&inc.u)?,
        j_b: jacobian(&inc.b)?,
        j_c: jacobian(&c)?,
        div_qv: divergence(&qv).to_samples()?,
        a,
    })
}

/// ```text
/// R1 = (1+a)(v+U)·∇Pv + (1+a)(v+U)·∇U + a(v+U)·∇Qv
///      + k(a)∇a − (B+c)·∇(B+c) + ½∇|B+c|²
/// ```
pub fn remainder_r1(
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<VectorField> {
    let p = pieces(comp, inc, params)?;
    let one_plus_a: Vec<f64> = p.a.iter().map(|x| 1.0 + x).collect();
    let w = add(&p.v, &p.big_u);
    let bc = add(&p.big_b, &p.c);
    let j_bc = add_jac(&p.j_b, &p.j_c);

    let mut r = zeros(p.a.len());
    axpy_into(&mut r, 1.0, &scale_by(&one_plus_a, &advect(&w, &p.j_pv)));
    axpy_into(&mut r, 1.0, &scale_by(&one_plus_a, &advect(&w, &p.j_u)));
    axpy_into(&mut r, 1.0, &scale_by(&p.a, &advect(&w, &p.j_qv)));
    axpy_into(&mut r, 1.0, &scale_by(&p.k, &p.grad_a));
    axpy_into(&mut r, -1.0, &advect(&bc, &j_bc));
    axpy_into(&mut r, 1.0, &half_grad_sq(&bc, &j_bc));
    to_vec_field(comp.grid(), &r)
}

/// ```text
/// R2 = (1+a)(v+U)·∇Qv + (1+a)v·∇U + a(v+U)·∇Pv + aU·∇U
///      − (B+c)·∇c − c·∇B
/// ```
pub fn remainder_r2(
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<VectorField> {
    let p = pieces(comp, inc, params)?;
    let one_plus_a: Vec<f64> = p.a.iter().map(|x| 1.0 + x).collect();
    let w = add(&p.v, &p.big_u);
    let bc = add(&p.big_b, &p.c);

    let mut r = zeros(p.a.len());
    axpy_into(&mut r, 1.0, &scale_by(&one_plus_a, &advect(&w, &p.j_qv)));
    axpy_into(&mut r, 1.0, &scale_by(&one_plus_a, &advect(&p.v, &p.j_u)));
    axpy_into(&mut r, 1.0, &scale_by(&p.a, &advect(&w, &p.j_pv)));
    axpy_into(&mut r, 1.0, &scale_by(&p.a, &advect(&p.big_u, &p.j_u)));
    axpy_into(&mut r, -1.0, &advect(&bc, &p.j_c));
    axpy_into(&mut r, -1.0, &advect(&p.c, &p.j_b));
    to_vec_field(comp.grid(), &r)
}

/// ```text
/// R3 = (div Qv)B + (div Qv)c + v·∇B − (B+c)·∇v − c·∇U
/// ```
pub fn remainder_r3(
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<VectorField> {
    let p = pieces(comp, inc, params)?;
    let bc = add(&p.big_b, &p.c);

    let mut r = zeros(p.a.len());
    axpy_into(&mut r, 1.0, &scale_by(&p.div_qv, &p.big_b));
    axpy_into(&mut r, 1.0, &scale_by(&p.div_qv, &p.c));
    axpy_into(&mut r, 1.0, &advect(&p.v, &p.j_b));
    axpy_into(&mut r, -1.0, &advect(&bc, &p.j_v));
    axpy_into(&mut r, -1.0, &advect(&p.c, &p.j_u));
    to_vec_field(comp.grid(), &r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Complex64;
    use crate::spectral::{perp_gradient, GridSpec, SpectralField};
    use std::f64::consts::PI;

    fn fields() -> (GridSpec, VectorField, VectorField) {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let mut psi = SpectralField::zeros(&g);
        psi.set_mode(1, 2, Complex64::new(0.2, 0.1));
        let mut phi = SpectralField::zeros(&g);
        phi.set_mode(2, -1, Complex64::new(-0.1, 0.3));
        (g, perp_gradient(&psi), perp_gradient(&phi))
    }

    #[test]
    fn vanishing_deviation_kills_r2_and_r3() {
        let (g, u, b) = fields();
        let params = PhysParams::new(0.1, 1.0, 0.1, 1.4).unwrap();
        let comp = CompressibleState {
            a: SpectralField::zeros(&g),
            u: u.clone(),
            b: b.clone(),
            t: 0.0,
        };
        let inc = IncompressibleState { u, b, t: 0.0 };
        assert!(remainder_r2(&comp, &inc, &params).unwrap().max_coeff() < 1e-16);
        assert!(remainder_r3(&comp, &inc, &params).unwrap().max_coeff() < 1e-16);
    }
}
