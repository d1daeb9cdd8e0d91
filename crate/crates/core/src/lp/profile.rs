use std::collections::BTreeMap;

use crate::spectral::{GridSpec, SpectralField, VectorField, Wavenumbers};

const INNER: f64 = 3.0 / 4.0;
const OUTER: f64 = 4.0 / 3.0;

fn bump(t: f64) -> f64 {
    if t > 0.0 {
        (-1.0 / t).exp()
    } else {
        0.0
    }
}

/// Smooth radial step: 1 on `|ξ| ≤ 3/4`, 0 on `|ξ| ≥ 4/3`.
pub fn chi(r: f64) -> f64 {
    if r <= INNER {
        return 1.0;
    }
    if r >= OUTER {
        return 0.0;
    }
    let up = bump(OUTER - r);
    let down = bump(r - INNER);
    up / (up + down)
}

/// Dyadic profile `φ(ξ) = χ(ξ/2) − χ(ξ)`, supported in `3/4 ≤ |ξ| ≤ 8/3`.
pub fn phi(r: f64) -> f64 {
    chi(r / 2.0) - chi(r)
}

/// First dyadic index whose annulus can contain radius `r > 0`.
fn first_block(r: f64) -> i32 {
    // φ(2^{-j} r) ≠ 0 requires log2(r) − log2(8/3) < j < log2(r) + log2(4/3)
    (r.log2() - (8.0f64 / 3.0).log2()).floor() as i32 + 1
}

/// The profile `φ` evaluated on every grid mode, with the finite block range
/// that covers all nonzero modes.
///
/// Each nonzero mode meets at most two consecutive blocks, so the profile
/// stores the first block index and the two weights per mode.
#[derive(Debug, Clone)]
pub struct DyadicProfile {
    grid: GridSpec,
    j_min: i32,
    j_max: i32,
    first: Vec<i32>,
    weights: Vec<[f64; 2]>,
}

impl DyadicProfile {
    pub fn new(grid: &GridSpec) -> Self {
        let w = Wavenumbers::new(grid);
        let n = grid.n;
        let mut first = vec![0; grid.len()];
        let mut weights = vec![[0.0; 2]; grid.len()];
        for idx in 1..grid.len() {
            let (a, b) = (w.full[idx / n], w.full[idx % n]);
            let r = (a * a + b * b).sqrt();
            let j = first_block(r);
            first[idx] = j;
            weights[idx] = [phi(r / 2f64.powi(j)), phi(r / 2f64.powi(j + 1))];
        }
        let j_min = first_block(grid.min_wavenumber());
        let j_max = first_block(grid.max_wavenumber()) + 1;
        DyadicProfile {
            grid: *grid,
            j_min,
            j_max,
            first,
            weights,
        }
    }

    /// Copy of this profile with every weight multiplied by `factor`.
    /// Only useful for fault injection in the property suite.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut p = self.clone();
        for w in p.weights.iter_mut() {
            w[0] *= factor;
            w[1] *= factor;
        }
        p
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn j_min(&self) -> i32 {
        self.j_min
    }

    pub fn j_max(&self) -> i32 {
        self.j_max
    }

    pub fn blocks(&self) -> std::ops::RangeInclusive<i32> {
        self.j_min..=self.j_max
    }

    pub fn block_count(&self) -> usize {
        (self.j_max - self.j_min + 1) as usize
    }

    /// `φ(2^{-j} ξ)` at FFT index `idx`.
    #[inline]
    pub fn multiplier(&self, idx: usize, j: i32) -> f64 {
        if idx == 0 {
            return 0.0;
        }
        let f = self.first[idx];
        if j == f {
            self.weights[idx][0]
        } else if j == f + 1 {
            self.weights[idx][1]
        } else {
            0.0
        }
    }

    /// `(j, [φ(2^{-j}ξ), φ(2^{-j-1}ξ)])`: the first block meeting mode `idx`
    /// and its two weights. `None` for the zero mode.
    pub fn block_weights(&self, idx: usize) -> Option<(i32, [f64; 2])> {
        (idx != 0).then(|| (self.first[idx], self.weights[idx]))
    }

    /// `Σ_{j∈J} φ(2^{-j} ξ)` at `idx` for the blocks selected by `keep`.
    #[inline]
    pub fn multiplier_sum(&self, idx: usize, keep: impl Fn(i32) -> bool) -> f64 {
        if idx == 0 {
            return 0.0;
        }
        let f = self.first[idx];
        let w = self.weights[idx];
        let mut s = 0.0;
        if keep(f) {
            s += w[0];
        }
        if keep(f + 1) {
            s += w[1];
        }
        s
    }

    /// Largest `|Σ_j φ(2^{-j}ξ) − 1|` over nonzero grid modes, summing every
    /// block in `[j_min, j_max]`.
    pub fn partition_residual(&self) -> f64 {
        (1..self.grid.len())
            .map(|idx| {
                let s: f64 = self.blocks().map(|j| self.multiplier(idx, j)).sum();
                (s - 1.0).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest `|φ_j φ_k|` over grid modes and block pairs with `|j − k| ≥ 2`.
    pub fn overlap_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for idx in 1..self.grid.len() {
            for j in self.blocks() {
                let mj = self.multiplier(idx, j);
                if mj == 0.0 {
                    continue;
                }
                for k in (j + 2)..=self.j_max {
                    worst = worst.max((mj * self.multiplier(idx, k)).abs());
                }
            }
        }
        worst
    }

    /// Squared L² norms `‖Δ̇_j f‖²` for `j = j_min..=j_max` (Parseval).
    pub fn block_sq_norms(&self, f: &SpectralField) -> Vec<f64> {
        let mut out = vec![0.0; self.block_count()];
        self.accumulate_sq(f, 1.0, &mut out);
        out
    }

    /// Per-block Euclidean norms across the components of `v`, squared.
    pub fn block_sq_norms_vec(&self, v: &VectorField) -> Vec<f64> {
        let mut out = vec![0.0; self.block_count()];
        for c in v.components() {
            self.accumulate_sq(c, 1.0, &mut out);
        }
        out
    }

    /// Adds `weight · ‖Δ̇_j f‖²` into `out[j − j_min]`.
    pub fn accumulate_sq(&self, f: &SpectralField, weight: f64, out: &mut [f64]) {
        let vol = self.grid.volume() * weight;
        for (idx, c) in f.coeffs().iter().enumerate().skip(1) {
            let e = c.norm_sqr() * vol;
            if e == 0.0 {
                continue;
            }
            let j = (self.first[idx] - self.j_min) as usize;
            let w = self.weights[idx];
            if j < out.len() {
                out[j] += w[0] * w[0] * e;
            }
            if j + 1 < out.len() {
                out[j + 1] += w[1] * w[1] * e;
            }
        }
    }
}

/// Dyadic blocks `Δ̇_j f` of one field over the profile's block range.
#[derive(Debug, Clone)]
pub struct LpDecomposition {
    pub blocks: BTreeMap<i32, SpectralField>,
}

impl LpDecomposition {
    pub fn new(profile: &DyadicProfile, f: &SpectralField) -> Self {
        LpDecomposition {
            blocks: profile
                .blocks()
                .map(|j| (j, lp_block(profile, f, j)))
                .collect(),
        }
    }

    /// `Σ_j Δ̇_j f`, which equals `f` minus its mean.
    pub fn reconstruct(&self) -> Option<SpectralField> {
        let mut it = self.blocks.values();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, b| &acc + b))
    }
}

/// `Δ̇_j f = φ(2^{-j}D) f`. Blocks outside `[j_min, j_max]` are zero.
pub fn lp_block(profile: &DyadicProfile, f: &SpectralField, j: i32) -> SpectralField {
    f.apply_multiplier(|idx, _, _| profile.multiplier(idx, j).into())
}

/// `Ṡ_j f = Σ_{k ≤ j−1} Δ̇_k f`.
pub fn lp_lowpass(profile: &DyadicProfile, f: &SpectralField, j: i32) -> SpectralField {
    f.apply_multiplier(|idx, _, _| profile.multiplier_sum(idx, |k| k <= j - 1).into())
}

/// Low/high split of `f` at the dyadic threshold `2^j κ ≤ 1`.
///
/// The low part collects blocks with `2^j κ ≤ 1`, the high part the rest;
/// their sum is `f` minus its mean.
pub fn low_high_split(
    profile: &DyadicProfile,
    f: &SpectralField,
    kappa: f64,
) -> (SpectralField, SpectralField) {
    let low = |j: i32| 2f64.powi(j) * kappa <= 1.0;
    let lo = f.apply_multiplier(|idx, _, _| profile.multiplier_sum(idx, low).into());
    let hi = f.apply_multiplier(|idx, _, _| profile.multiplier_sum(idx, |j| !low(j)).into());
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Complex64;
    use std::f64::consts::PI;

    #[test]
    fn phi_support() {
        assert_eq!(phi(0.74), 0.0);
        assert_eq!(phi(2.67), 0.0);
        assert!(phi(0.8) > 0.0);
        assert!(phi(2.6) > 0.0);
        assert_eq!(phi(1.4), 1.0);
    }

    #[test]
    fn phi_vanishes_below_annulus() {
        // |ξ| = 0.5·2^j rescales to 0.5 for every j
        assert_eq!(phi(0.5), 0.0);
    }

    #[test]
    fn block_range_brackets_grid() {
        let g = GridSpec::new(64, 2.0 * PI).unwrap();
        let p = DyadicProfile::new(&g);
        assert!(2f64.powi(p.j_min()) * 0.75 <= g.min_wavenumber());
        assert!(2f64.powi(p.j_max()) * 8.0 / 3.0 >= g.max_wavenumber());
    }

    #[test]
    fn out_of_range_block_is_zero() {
        let g = GridSpec::new(16, 2.0 * PI).unwrap();
        let p = DyadicProfile::new(&g);
        let mut f = SpectralField::zeros(&g);
        f.set_mode(1, 2, Complex64::new(1.0, 1.0));
        assert_eq!(lp_block(&p, &f, p.j_max() + 3).max_coeff(), 0.0);
        assert_eq!(lp_block(&p, &f, p.j_min() - 1).max_coeff(), 0.0);
    }
}
