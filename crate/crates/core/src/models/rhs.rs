use super::params::PhysParams;
use super::physical::{
    advect, grad_samples, half_grad_sq, jacobian, to_field, to_vec_field, vec_samples,
};
use super::state::{require_density, CompressibleState, IncompressibleState};
use crate::error::Result;
use crate::spectral::{
    dealias, divergence, gradient, laplacian_vec, project_p, SpectralField, VectorField,
};

/// Time derivative of a compressible state.
#[derive(Debug, Clone, PartialEq)]
pub struct CompressibleRhs {
    pub a: SpectralField,
    pub u: VectorField,
    pub b: VectorField,
}

/// Time derivative of an incompressible state.
#[derive(Debug, Clone, PartialEq)]
pub struct IncompressibleRhs {
    pub u: VectorField,
    pub b: VectorField,
}

/// Right-hand side of the compressible system in velocity form:
///
/// ```text
/// a_t = −div(a u) − div u
/// u_t = −u·∇u − P′(1+a)∇a + [μΔu + (μ+λ)∇div u + b·∇b − ½∇|b|²] / (1+a)
/// b_t = −(div u) b − u·∇b + b·∇u + νΔb
/// ```
///
/// Products are formed in physical space and dealiased; the division by
/// `1 + a` is pointwise.
pub fn rhs_compressible(state: &CompressibleState, params: &PhysParams) -> Result<CompressibleRhs> {
    let grid = *state.grid();
    grid.require_2d()?;
    let law = params.pressure();
    let a = require_density(state)?;
    let u = vec_samples(&state.u)?;
    let b = vec_samples(&state.b)?;
    let ju = jacobian(&state.u)?;
    let jb = jacobian(&state.b)?;
    let grad_a = grad_samples(&state.a)?;
    let lap_u = vec_samples(&laplacian_vec(&state.u))?;
    let div_u_hat = divergence(&state.u);
    let grad_div_u = grad_samples(&div_u_hat)?;
    let len = grid.len();

    // continuity
    let flux = [
        a.iter().zip(&u[0]).map(|(x, y)| x * y).collect::<Vec<_>>(),
        a.iter().zip(&u[1]).map(|(x, y)| x * y).collect::<Vec<_>>(),
    ];
    let flux = to_vec_field(&grid, &flux)?;
    let mut da = &divergence(&flux) + &div_u_hat;
    da = da.scale(-1.0);
    da.set_mean(0.0);

    // momentum
    let adv = advect(&u, &ju);
    let b_grad_b = advect(&b, &jb);
    let mag_p = half_grad_sq(&b, &jb);
    let bulk = params.mu + params.lambda;
    let mut du = [vec![0.0; len], vec![0.0; len]];
    for i in 0..2 {
        for p in 0..len {
            let rho = 1.0 + a[p];
            let visc = params.mu * lap_u[i][p] + bulk * grad_div_u[i][p];
            let lorentz = b_grad_b[i][p] - mag_p[i][p];
            du[i][p] = -adv[i][p] - law.derivative(rho) * grad_a[i][p] + (visc + lorentz) / rho;
        }
    }
    let du = to_vec_field(&grid, &du)?;

    // induction
    let div_u = ju[0][0]
        .iter()
        .zip(&ju[1][1])
        .map(|(x, y)| x + y)
        .collect::<Vec<_>>();
    let u_grad_b = advect(&u, &jb);
    let b_grad_u = advect(&b, &ju);
    let mut db = [vec![0.0; len], vec![0.0; len]];
    for i in 0..2 {
        for p in 0..len {
            db[i][p] = -div_u[p] * b[i][p] - u_grad_b[i][p] + b_grad_u[i][p];
        }
    }
    let db = &to_vec_field(&grid, &db)? + &laplacian_vec(&state.b).scale(params.nu);

    Ok(CompressibleRhs {
        a: da,
        u: du,
        b: db,
    })
}

/// Right-hand side of the incompressible limit system with the pressure
/// removed by the Leray projector:
///
/// ```text
/// U_t = P[−U·∇U + B·∇B] + μΔU
/// B_t = −U·∇B + B·∇U + νΔB
/// ```
pub fn rhs_incompressible(
    state: &IncompressibleState,
    params: &PhysParams,
) -> Result<IncompressibleRhs> {
    let grid = *state.grid();
    grid.require_2d()?;
    let u = vec_samples(&state.u)?;
    let b = vec_samples(&state.b)?;
    let ju = jacobian(&state.u)?;
    let jb = jacobian(&state.b)?;
    let len = grid.len();

    let adv_u = advect(&u, &ju);
    let b_grad_b = advect(&b, &jb);
    let u_grad_b = advect(&u, &jb);
    let b_grad_u = advect(&b, &ju);
    let mut nu_ = [vec![0.0; len], vec![0.0; len]];
    let mut nb = [vec![0.0; len], vec![0.0; len]];
    for i in 0..2 {
        for p in 0..len {
            nu_[i][p] = -adv_u[i][p] + b_grad_b[i][p];
            nb[i][p] = -u_grad_b[i][p] + b_grad_u[i][p];
        }
    }
    let du = &project_p(&to_vec_field(&grid, &nu_)?) + &laplacian_vec(&state.u).scale(params.mu);
    let db = &to_vec_field(&grid, &nb)? + &laplacian_vec(&state.b).scale(params.nu);
    Ok(IncompressibleRhs { u: du, b: db })
}

/// `k(a) = P′(1+a) − 1` evaluated pointwise and dealiased.
pub fn k_of_a(a: &SpectralField, params: &PhysParams) -> Result<SpectralField> {
    let law = params.pressure();
    let s = a.to_samples()?;
    let min = s.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(1.0 + min > 0.0) {
        return Err(crate::Error::SingularDensity {
            min_density: 1.0 + min,
        });
    }
    let k: Vec<f64> = s.iter().map(|&x| law.k(x)).collect();
    to_field(a.grid(), &k)
}

/// Energy rate `d/dt(½‖U‖² + ½‖B‖²) = ⟨U, U_t⟩ + ⟨B, B_t⟩` from a right-hand side.
pub fn energy_rate(state: &IncompressibleState, rhs: &IncompressibleRhs) -> f64 {
    let vol = state.grid().volume();
    let dot = |x: &VectorField, y: &VectorField| -> f64 {
        x.components()
            .iter()
            .zip(y.components())
            .map(|(p, q)| {
                p.coeffs()
                    .iter()
                    .zip(q.coeffs())
                    .map(|(s, t)| (s.conj() * t).re)
                    .sum::<f64>()
            })
            .sum::<f64>()
            * vol
    };
    dot(&state.u, &rhs.u) + dot(&state.b, &rhs.b)
}

/// `‖∇v‖²_{L²}`.
pub fn gradient_sq_norm(v: &VectorField) -> f64 {
    v.components()
        .iter()
        .map(|c| gradient(c).l2_norm().powi(2))
        .sum()
}

/// Dealiases every field of a compressible state in place.
pub fn truncate_compressible(state: &mut CompressibleState) {
    state.a = dealias(&state.a);
    state.u = state.u.map(dealias);
    state.b = state.b.map(dealias);
}
