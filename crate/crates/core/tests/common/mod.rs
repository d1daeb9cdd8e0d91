//! Dense matrix-exponential oracle in double-double arithmetic.
#![allow(dead_code)]

use bmhd::integrate::LinearCoefficients;
use bmhd::spectral::Complex64;
use twofloat::TwoFloat;

pub type M = Vec<Vec<Complex64>>;

/// Complex double-double, enough precision that squaring a stiff exponential
/// stays far below the tolerances checked here.
#[derive(Clone, Copy)]
pub struct Dd {
    pub re: TwoFloat,
    pub im: TwoFloat,
}

impl Dd {
    pub fn zero() -> Self {
        Dd { re: TwoFloat::from(0.0), im: TwoFloat::from(0.0) }
    }
    pub fn from(z: Complex64) -> Self {
        Dd { re: TwoFloat::from(z.re), im: TwoFloat::from(z.im) }
    }
    pub fn add(self, o: Dd) -> Dd {
        Dd { re: self.re + o.re, im: self.im + o.im }
    }
    pub fn mul(self, o: Dd) -> Dd {
        Dd { re: self.re * o.re - self.im * o.im, im: self.re * o.im + self.im * o.re }
    }
    pub fn scale(self, x: f64) -> Dd {
        Dd { re: self.re * x, im: self.im * x }
    }
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(f64::from(self.re), f64::from(self.im))
    }
}

pub type Dm = Vec<Vec<Dd>>;

fn mul(a: &Dm, b: &Dm) -> Dm {
    let n = a.len();
    let mut c = vec![vec![Dd::zero(); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                c[i][j] = c[i][j].add(a[i][k].mul(b[k][j]));
            }
        }
    }
    c
}

fn norm1(a: &Dm) -> f64 {
    (0..a.len())
        .map(|j| a.iter().map(|r| r[j].to_c64().norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Dense `exp(A)` by scaling and squaring with a degree-30 Taylor polynomial.
pub fn expm(a: &Dm) -> M {
    let n = a.len();
    let s = norm1(a).max(1.0).log2().ceil() as i32 + 4;
    let scale = 2f64.powi(-s);
    let a: Dm = a.iter().map(|r| r.iter().map(|x| x.scale(scale)).collect()).collect();
    let mut out = vec![vec![Dd::zero(); n]; n];
    let mut term = out.clone();
    for i in 0..n {
        out[i][i] = Dd::from(Complex64::new(1.0, 0.0));
        term[i][i] = out[i][i];
    }
    for k in 1..=30 {
        term = mul(&term, &a);
        for r in term.iter_mut() {
            for x in r.iter_mut() {
                *x = x.scale(1.0 / k as f64);
            }
        }
        for i in 0..n {
            for j in 0..n {
                out[i][j] = out[i][j].add(term[i][j]);
            }
        }
    }
    for _ in 0..s {
        out = mul(&out, &out);
    }
    out.iter().map(|r| r.iter().map(|x| x.to_c64()).collect()).collect()
}

/// Generator on `(â, û₀, û₁)` for integer mode `(k0, k1)` on the 2π torus,
/// assembled without rounding.
pub fn cartesian_generator(k0: f64, k1: f64, c: &LinearCoefficients) -> Dm {
    let tf = TwoFloat::from;
    let z = TwoFloat::from(0.0);
    let im = |x: TwoFloat| Dd { re: z, im: -x };
    let xi = [tf(k0), tf(k1)];
    let k2 = xi[0] * xi[0] + xi[1] * xi[1];
    let mut g = vec![vec![Dd::zero(); 3]; 3];
    for r in 0..2 {
        g[0][1 + r] = im(xi[r]);
        g[1 + r][0] = im(xi[r]);
        for s in 0..2 {
            let mut v = -(tf(c.bulk) * xi[r] * xi[s]);
            if r == s {
                v = v - tf(c.shear) * k2;
            }
            g[1 + r][1 + s] = Dd { re: v, im: z };
        }
    }
    g
}

/// `exp(tG)`, `t φ1(tG)` and `t φ2(tG)` from the exponential of an augmented
/// block matrix.
pub fn phi_oracle(g: &Dm, t: f64) -> [M; 3] {
    let n = g.len();
    let tt = Dd::from(Complex64::new(t, 0.0));
    let mut big = vec![vec![Dd::zero(); 3 * n]; 3 * n];
    for i in 0..n {
        for j in 0..n {
            big[i][j] = g[i][j].mul(tt);
        }
        big[i][n + i] = tt;
        big[n + i][2 * n + i] = Dd::from(Complex64::new(1.0, 0.0));
    }
    let e = expm(&big);
    let block = |c0: usize| -> M { (0..n).map(|i| (0..n).map(|j| e[i][c0 + j]).collect()).collect() };
    [block(0), block(n), block(2 * n)]
}
