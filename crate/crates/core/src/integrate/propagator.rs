use crate::models::PhysParams;
use crate::spectral::{Complex64, GridSpec, Wavenumbers};

pub type Mat2 = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

pub fn identity2() -> Mat2 {
    [[ONE, ZERO], [ZERO, ONE]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn mat_vec(m: &Mat2, x: [Complex64; 2]) -> [Complex64; 2] {
    [
        m[0][0] * x[0] + m[0][1] * x[1],
        m[1][0] * x[0] + m[1][1] * x[1],
    ]
}

/// Generator of the linear acoustic block for `(â, q̂)` with `q̂ = k̂·û`:
/// `[[0, −i k], [−i k, −damping]]`.
pub fn acoustic_generator(k: f64, damping: f64) -> Mat2 {
    let mik = Complex64::new(0.0, -k);
    [[ZERO, mik], [mik, Complex64::new(-damping, 0.0)]]
}

/// `φ_k(z) = Σ_m z^m / (m + k)!`, so `φ_0 = e^z`, `φ_1 = (e^z − 1)/z`, ...
pub fn phi_fn(k: usize, z: Complex64) -> Complex64 {
    if z.norm() < 1.0 {
        let mut term = Complex64::new(1.0 / factorial(k), 0.0);
        let mut sum = term;
        for m in 1..40 {
            term = term * z / (m + k) as f64;
            sum += term;
        }
        return sum;
    }
    let mut p = z.exp();
    for j in 0..k {
        p = (p - 1.0 / factorial(j)) / z;
    }
    p
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

/// `d^r/dz^r φ_k`, using `φ_k′ = φ_k − k φ_{k+1}`.
fn phi_derivative(k: usize, r: usize, z: Complex64) -> Complex64 {
    let mut coeffs = vec![0.0; r + 1];
    coeffs[0] = 1.0;
    for _ in 0..r {
        let mut next = vec![0.0; r + 1];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0.0 {
                next[i] += c;
                if i < r {
                    next[i + 1] -= c * (k + i) as f64;
                }
            }
        }
        coeffs = next;
    }
    coeffs
        .iter()
        .enumerate()
        .map(|(i, &c)| c * phi_fn(k + i, z))
        .sum()
}

/// Divided difference `(φ_k(z1) − φ_k(z2)) / (z1 − z2)`, by a central
/// expansion when the nodes nearly coincide.
fn phi_divided(k: usize, z1: Complex64, z2: Complex64) -> Complex64 {
    let d = z1 - z2;
    let m = 0.5 * (z1 + z2);
    if d.norm() > 1e-3 * m.norm().max(1.0) {
        (phi_fn(k, z1) - phi_fn(k, z2)) / d
    } else {
        let h = 0.5 * d;
        phi_derivative(k, 1, m) + phi_derivative(k, 3, m) * h * h / 6.0
    }
}

/// `φ_order(t · acoustic_generator(k, damping))`.
///
/// The eigenvalues solve `λ² + cλ + k² = 0`; the large one is taken from
/// the quadratic formula and the small one from `λ₁λ₂ = k²`, then the matrix
/// function is assembled in Newton form `f(z₂) I + f[z₁, z₂](tG − z₂ I)`,
/// which is exact for 2×2 matrices including the defective case.
pub fn acoustic_function(order: usize, k: f64, damping: f64, t: f64) -> Mat2 {
    let half = 0.5 * damping;
    let s = Complex64::new(half * half - k * k, 0.0).sqrt();
    let lam1 = -half - s;
    let lam2 = if lam1.norm() > 0.0 {
        k * k / lam1
    } else {
        ZERO
    };
    let (z1, z2) = (lam1 * t, lam2 * t);
    let f2 = phi_fn(order, z2);
    let dd = phi_divided(order, z1, z2);
    let g = acoustic_generator(k, damping);
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            let shifted = g[i][j] * t - if i == j { z2 } else { ZERO };
            out[i][j] = dd * shifted + if i == j { f2 } else { ZERO };
        }
    }
    out
}

/// `exp(t · acoustic_generator(k, damping))`.
pub fn acoustic_exp(k: f64, damping: f64, t: f64) -> Mat2 {
    acoustic_function(0, k, damping, t)
}

/// Linear-part coefficients treated exactly by the stepper.
///
/// The physical values are `shear = μ`, `bulk = μ + λ`, `resistivity = ν`;
/// the stepper may inflate the viscous ones (see [`LinearCoefficients::stabilized`]).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearCoefficients {
    pub shear: f64,
    pub bulk: f64,
    pub resistivity: f64,
}

impl LinearCoefficients {
    pub fn physical(params: &PhysParams) -> Self {
        LinearCoefficients {
            shear: params.mu,
            bulk: params.mu + params.lambda,
            resistivity: params.nu,
        }
    }

    /// Viscous coefficients multiplied by `factor ≥ 1`.
    ///
    /// The velocity equation carries `[μΔu + (μ+λ)∇div u]/(1+a)`. With
    /// `factor = max(1, 1/min(1+a))` the linear part dominates the true
    /// variable-coefficient diffusion everywhere, so the explicit remainder is
    /// anti-diffusive with relative strength below one, which the
    /// exponential Runge-Kutta step damps for any step size.
    pub fn stabilized(params: &PhysParams, factor: f64) -> Self {
        let f = factor.max(1.0);
        LinearCoefficients {
            shear: params.mu * f,
            bulk: (params.mu + params.lambda) * f,
            resistivity: params.nu,
        }
    }

    pub fn kappa(&self) -> f64 {
        self.shear + self.bulk
    }
}

/// Per-mode functions of the constant-coefficient linear part over one
/// step (the exponential, or one of the `dt·φ_k` weights).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModePropagator {
    /// Acts on `(â, k̂·û)`.
    pub acoustic: Mat2,
    /// Factor for the transverse (divergence-free) part of `û`.
    pub transverse: f64,
    /// Factor for `b̂`.
    pub magnetic: f64,
    /// Factors for the incompressible `Û` and `B̂`.
    pub inc_velocity: f64,
    pub inc_magnetic: f64,
}

/// Which function of `dt L` a table holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PropagatorKind {
    /// `exp(dt L)`.
    Exp,
    /// `dt φ_1(dt L)`.
    Phi1,
    /// `dt φ_2(dt L)`.
    Phi2,
}

impl PropagatorKind {
    fn order(self) -> usize {
        match self {
            PropagatorKind::Exp => 0,
            PropagatorKind::Phi1 => 1,
            PropagatorKind::Phi2 => 2,
        }
    }
}

/// Tables of [`ModePropagator`]s for every grid mode.
///
/// Acoustic coupling uses the odd wavevector (Nyquist component zeroed),
/// matching the spectral gradient and divergence; diffusion uses `|ξ|²`.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    grid: GridSpec,
    dt: f64,
    coeffs: LinearCoefficients,
    tables: [Vec<ModePropagator>; 3],
}

impl LinearPropagator {
    pub fn new(grid: &GridSpec, coeffs: LinearCoefficients, inc: (f64, f64), dt: f64) -> Self {
        let w = Wavenumbers::new(grid);
        let n = grid.n;
        let table = |kind: PropagatorKind| -> Vec<ModePropagator> {
            let order = kind.order();
            let weight = if order == 0 { 1.0 } else { dt };
            let scalar = |rate: f64| weight * phi_fn(order, Complex64::new(-rate * dt, 0.0)).re;
            (0..grid.len())
                .map(|idx| {
                    let (o0, o1) = (w.odd[idx / n], w.odd[idx % n]);
                    let (f0, f1) = (w.full[idx / n], w.full[idx % n]);
                    let k_odd = (o0 * o0 + o1 * o1).sqrt();
                    let k2 = f0 * f0 + f1 * f1;
                    let damping = coeffs.shear * k2 + coeffs.bulk * k_odd * k_odd;
                    let mut acoustic = acoustic_function(order, k_odd, damping, dt);
                    for row in acoustic.iter_mut() {
                        for x in row.iter_mut() {
                            *x *= weight;
                        }
                    }
                    ModePropagator {
                        acoustic,
                        transverse: scalar(coeffs.shear * k2),
                        magnetic: scalar(coeffs.resistivity * k2),
                        inc_velocity: scalar(inc.0 * k2),
                        inc_magnetic: scalar(inc.1 * k2),
                    }
                })
                .collect()
        };
        LinearPropagator {
            grid: *grid,
            dt,
            coeffs,
            tables: [
                table(PropagatorKind::Exp),
                table(PropagatorKind::Phi1),
                table(PropagatorKind::Phi2),
            ],
        }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn coefficients(&self) -> LinearCoefficients {
        self.coeffs
    }

    /// Exponential at flat index `idx`.
    pub fn mode(&self, idx: usize) -> &ModePropagator {
        &self.tables[0][idx]
    }

    pub fn mode_of(&self, kind: PropagatorKind, idx: usize) -> &ModePropagator {
        &self.tables[kind.order()][idx]
    }

    /// Exponential for integer wavevector `(k0, k1)`.
    pub fn mode_at(&self, k0: i64, k1: i64) -> &ModePropagator {
        self.mode(self.grid.index_of(k0) * self.grid.n + self.grid.index_of(k1))
    }
}

/// Exact per-mode propagator of the linearized compressible system
/// `a_t = −div u`, `u_t = −∇a + μΔu + (μ+λ)∇div u`, `b_t = νΔb`, and of the
/// heat parts `μΔU`, `νΔB` of the incompressible system, over one step `dt`.
pub fn linear_propagator(params: &PhysParams, grid: &GridSpec, dt: f64) -> LinearPropagator {
    LinearPropagator::new(
        grid,
        LinearCoefficients::physical(params),
        (params.mu, params.nu),
        dt,
    )
}
