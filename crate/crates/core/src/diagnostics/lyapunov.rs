use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::lp::DyadicProfile;
use crate::models::{CompressibleState, IncompressibleState, PhysParams};
use crate::spectral::{project_q, Complex64, Wavenumbers};

/// Per-block Lyapunov energy of the acoustic part of the deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LyapunovBlock {
    pub j: i32,
    /// `∫ 2a_j² + |Qv_j|² + |Qv_j + κ∇a_j|²`.
    pub l_sq: f64,
    /// `‖(Qv_j, a_j, κ∇a_j)‖²_{L²}`.
    pub reference_sq: f64,
    /// `l_sq / reference_sq`, absent for an empty block.
    pub ratio: Option<f64>,
}

/// Lower end of the exact per-mode ratio range, `(3 − √5)/2`.
pub const LYAPUNOV_RATIO_MIN: f64 = 0.381_966_011_250_105_1;
/// Upper end of the exact per-mode ratio range.
pub const LYAPUNOV_RATIO_MAX: f64 = 3.0;

/// Lyapunov energies of `(a_j, Qv_j)` with `v = u − U` for every dyadic block.
pub fn lyapunov_blocks(
    profile: &DyadicProfile,
    comp: &CompressibleState,
    inc: &IncompressibleState,
    params: &PhysParams,
) -> Result<Vec<LyapunovBlock>> {
    let grid = *comp.grid();
    comp.a.check_same_grid(inc.u.component(0))?;
    let kappa = params.kappa();
    let qv = project_q(&(&comp.u - &inc.u));
    let w = Wavenumbers::new(&grid);
    let n = grid.n;
    let vol = grid.volume();
    let nb = profile.block_count();
    let mut l = vec![0.0; nb];
    let mut r = vec![0.0; nb];
    let i = Complex64::new(0.0, 1.0);
    let (a, q0, q1) = (
        comp.a.coeffs(),
        qv.component(0).coeffs(),
        qv.component(1).coeffs(),
    );
    for idx in 1..grid.len() {
        let Some((first, weights)) = profile.block_weights(idx) else {
            continue;
        };
        let g0 = i * kappa * w.odd[idx / n] * a[idx];
        let g1 = i * kappa * w.odd[idx % n] * a[idx];
        let aa = a[idx].norm_sqr();
        let qq = q0[idx].norm_sqr() + q1[idx].norm_sqr();
        let mixed = (q0[idx] + g0).norm_sqr() + (q1[idx] + g1).norm_sqr();
        let el = (2.0 * aa + qq + mixed) * vol;
        let er = (aa + qq + g0.norm_sqr() + g1.norm_sqr()) * vol;
        for (off, wt) in weights.iter().enumerate() {
            let j = (first + off as i32 - profile.j_min()) as usize;
            if j < nb {
                l[j] += wt * wt * el;
                r[j] += wt * wt * er;
            }
        }
    }
    Ok(profile
        .blocks()
        .zip(l.into_iter().zip(r))
        .map(|(j, (l_sq, reference_sq))| LyapunovBlock {
            j,
            l_sq,
            reference_sq,
            ratio: (reference_sq > 0.0).then(|| l_sq / reference_sq),
        })
        .collect())
}

/// `(min, max)` of the defined ratios, or `None` when every block is empty.
pub fn ratio_range(blocks: &[LyapunovBlock]) -> Option<(f64, f64)> {
    blocks
        .iter()
        .filter_map(|b| b.ratio)
        .fold(None, |acc, r| match acc {
            None => Some((r, r)),
            Some((lo, hi)) => Some((lo.min(r), hi.max(r))),
        })
}
