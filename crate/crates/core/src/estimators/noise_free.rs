//! Exact recovery from noise-free soundings via pseudo-inverses.

use num_complex::Complex64;

use crate::error::{HrisError, Result};
use crate::linalg::{hstack, pinv_with_rank};
use crate::pilots::PilotMatrix;
use crate::CMat;

/// Smallest pilot length `ceil(N max(1, K / N_r))` that identifies both channels.
pub fn min_pilot_length(n: usize, k: usize, n_r: usize) -> usize {
    n.max((n * k).div_ceil(n_r))
}

/// Recover `G` from `y_RC = a A_RC G S`.
///
/// `vec(y_RC) = (S^T ⊗ A_RC) vec(G)`; the pseudo-inverse of the Kronecker
/// operator factorizes, so only `A_RC` and `S` are decomposed. The operator
/// rank is `rank(S) * rank(A_RC)`, which must reach `N K`.
pub fn recover_g_noisefree(y_rc: &CMat, tx_amplitude: f64, pilots: &PilotMatrix, a_rc: &CMat) -> Result<CMat> {
    let (rows, n) = a_rc.shape();
    let k = pilots.users();
    if y_rc.shape() != (rows, pilots.slots()) {
        return Err(HrisError::dims("y_RC", (rows, pilots.slots()), y_rc.shape()));
    }
    let required = n * k;
    if rows * pilots.slots() < required {
        return Err(HrisError::Identifiability { rank: (rows * pilots.slots()).min(required), required });
    }
    let (a_pinv, rank_a) = pinv_with_rank(a_rc)?;
    let (s_pinv, rank_s) = pinv_with_rank(pilots.matrix())?;
    let rank = rank_a * rank_s;
    if rank < required {
        return Err(HrisError::Identifiability { rank, required });
    }
    Ok(a_pinv * y_rc * s_pinv * Complex64::new(1.0 / tx_amplitude, 0.0))
}

/// Recover `H` from `y_BS(b) = a H Psi(b) G S` with `G` known.
///
/// Stacking the sub-frames gives `[y_BS(1) ... y_BS(B)] = a H Z` with
/// `Z = [Psi(1) G S, ..., Psi(B) G S]`, i.e. `vec = (Z^T ⊗ I_M) vec(H)`;
/// identifiable when `Z` has rank `N`.
pub fn recover_h_noisefree(
    y_bs: &[CMat],
    tx_amplitude: f64,
    g: &CMat,
    psi: &[CMat],
    pilots: &PilotMatrix,
) -> Result<CMat> {
    if y_bs.len() != psi.len() || y_bs.is_empty() {
        return Err(HrisError::DimensionMismatch {
            context: "BS sub-frames",
            expected: format!("{}", psi.len()),
            actual: format!("{}", y_bs.len()),
        });
    }
    let n = g.nrows();
    let gs = g * pilots.matrix();
    let z_blocks: Vec<CMat> = psi.iter().map(|p| p * &gs).collect();
    let z = hstack(&z_blocks);
    if z.ncols() < n {
        return Err(HrisError::Identifiability { rank: z.ncols(), required: n });
    }
    let y = hstack(y_bs);
    if y.ncols() != z.ncols() {
        return Err(HrisError::dims("stacked y_BS", (y.nrows(), z.ncols()), y.shape()));
    }
    let (z_pinv, rank) = pinv_with_rank(&z)?;
    if rank < n {
        return Err(HrisError::Identifiability { rank, required: n });
    }
    Ok(y * z_pinv * Complex64::new(1.0 / tx_amplitude, 0.0))
}
