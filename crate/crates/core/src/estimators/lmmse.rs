//! Linear MMSE estimators of `G` (at the HRIS) and `H` (at the BS).

use nalgebra::DVector;
use num_complex::Complex64;

use super::mse::{error_covariance, EffectiveNoiseCov};
use crate::error::{HrisError, Result};
use crate::linalg::{c, hpd_inverse, hpd_solve, identity, trace, unvec, vstack};
use crate::CMat;

/// Output of [`lmmse_g`].
#[derive(Debug, Clone, PartialEq)]
pub struct GEstimate {
    /// `N x K` estimate `Ĝ`.
    pub g_hat: CMat,
    /// Covariance `Sigma` of the estimate, `R_G - R_G̃`.
    pub sigma: CMat,
    /// Error covariance `R_G̃`.
    pub r_err: CMat,
}

/// `Ĝ = M_o ỹ_RC` with `M_o = R_G A^H (A R_G A^H + (K / (T Gamma)) I)^{-1}`.
///
/// `ytilde_rc` is the `(N_r B) x K` pilot-projected HRIS observation.
pub fn lmmse_g(ytilde_rc: &CMat, a_rc: &CMat, gammas: &[f64], t: usize, snr: f64, k: usize) -> Result<GEstimate> {
    let (rows, n) = a_rc.shape();
    if ytilde_rc.shape() != (rows, k) {
        return Err(HrisError::dims("ytilde_RC", (rows, k), ytilde_rc.shape()));
    }
    if !(snr > 0.0) {
        return Err(HrisError::Domain(format!("SNR {snr} must be positive")));
    }
    let r_g: f64 = gammas.iter().sum();
    let gain = t as f64 * snr / k as f64;
    let r_err = error_covariance(a_rc, r_g, gain)?;
    let sigma = identity(n) * c(r_g) - &r_err;
    if r_g == 0.0 {
        return Ok(GEstimate { g_hat: CMat::zeros(n, k), sigma, r_err });
    }
    // M_o = (inner^{-1} A R_G)^H since inner and R_G are Hermitian
    let inner = a_rc * a_rc.adjoint() * c(r_g) + identity(rows) * c(1.0 / gain);
    let m_o = hpd_solve(&inner, &(a_rc * c(r_g)))
        .map_err(|_| HrisError::Numerical("LMMSE inner matrix for G is singular".into()))?
        .adjoint();
    Ok(GEstimate { g_hat: m_o * ytilde_rc, sigma, r_err })
}

/// Output of [`lmmse_h`].
#[derive(Debug, Clone, PartialEq)]
pub struct HEstimate {
    /// `M x N` estimate `Ĥ`.
    pub h_hat: CMat,
    /// Error of this estimate given the conveyed `Ĝ`,
    /// `M Tr((I/beta + X^H D^{-1} X)^{-1})`.
    pub mse_bound: f64,
}

/// LMMSE of `H` from `ȳ = (X^T ⊗ I_M) vec(H) + z`, `X = [Psi(1)Ĝ ... Psi(B)Ĝ]`,
/// `z ~ CN(0, D ⊗ I_M)`.
///
/// Each row of `H` sees the same `BK`-dimensional regression, so the map is
/// built once at `N x BK` and applied as `Ĥ = Y L^T` with `Y = unvec(ȳ)`.
pub fn lmmse_h(
    ybar: &DVector<Complex64>,
    m: usize,
    g_hat: &CMat,
    psi: &[CMat],
    d: &EffectiveNoiseCov,
    beta: f64,
) -> Result<HEstimate> {
    let (n, k) = g_hat.shape();
    let b = psi.len();
    if d.subframes() != b || d.k != k {
        return Err(HrisError::dims("D blocks (B, K)", (b, k), (d.subframes(), d.k)));
    }
    if ybar.len() != m * k * b {
        return Err(HrisError::dims("ȳ", (m * k * b, 1), (ybar.len(), 1)));
    }
    if beta == 0.0 {
        return Ok(HEstimate { h_hat: CMat::zeros(m, n), mse_bound: 0.0 });
    }
    if !(beta > 0.0) {
        return Err(HrisError::Domain(format!("beta = {beta} must be non-negative")));
    }
    let g_t = g_hat.transpose();
    let x_hat = vstack(&psi.iter().map(|p| &g_t * p).collect::<Vec<_>>());
    let d_b_inv = d.block_inverse()?;
    // D^{-1} X = (D_B^{-1} ⊗ I_K) X, block b of rows mixes blocks b' with D_B^{-1}[b, b']
    let mut dinv_x = CMat::zeros(b * k, n);
    for i in 0..b {
        let mut acc = CMat::zeros(k, n);
        for j in 0..b {
            acc += x_hat.rows(j * k, k) * d_b_inv[(i, j)];
        }
        dinv_x.rows_mut(i * k, k).copy_from(&acc);
    }
    let precision = identity(n) * c(1.0 / beta) + x_hat.adjoint() * &dinv_x;
    let cov = hpd_inverse(&precision)?;
    let map = &cov * dinv_x.adjoint();
    let y = unvec(ybar, m, b * k);
    Ok(HEstimate { h_hat: y * map.transpose(), mse_bound: m as f64 * trace(&cov).re })
}
