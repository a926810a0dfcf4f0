//! Closed-form MSEs in reduced (N x N and B x B) form.
//!
//! Notation used below, for a configuration with `B` sub-frames:
//!
//! - `E = (R_G^{-1} + c A_RC^H A_RC)^{-1}` with `c = T Gamma / K`: error
//!   covariance of `Ĝ`; `eps_G = Tr(E)`.
//! - `Sigma = R_G - E`: covariance of `Ĝ`.
//! - `P`: `B x N` table of reflection coefficients, row `b` = diag `Psi(b)`.
//! - `D = D_B ⊗ I_K` with `D_B = (beta/K) P diag(E) P^H + (T Gamma)^{-1} I_B`.
//! - `W = D_B^{-T}`, so the `(i, j)` block of `D^{-T}` is `W_ij I_K`.
//! - `Q = K^2 Sigma ∘ (P^T W conj(P))`, which equals
//!   `K sum_ij Tr([D^{-T}]_ij) Psi(i) Sigma Psi(j)^H`.
//! - `eps_H = M Tr((I/beta + Q)^{-1})`, the `MN x MN` trace reduced through
//!   `(Q^T ⊗ I_M + I/beta)^{-1} = (Q^T + I/beta)^{-1} ⊗ I_M`.

use crate::channel::SystemConfig;
use crate::error::{HrisError, Result};
use crate::hris::{reflection_table, stack_reception, HrisParams};
use crate::linalg::{c, hermitize, hpd_inverse, identity, kron, trace};
use crate::CMat;

/// The statistics the closed forms depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationContext {
    /// BS antennas `M`.
    pub m: usize,
    /// Users `K`.
    pub k: usize,
    /// Slots per sub-frame `T`.
    pub t: usize,
    /// Transmit SNR `Gamma` (linear).
    pub snr: f64,
    /// HRIS-BS path loss `beta`.
    pub beta: f64,
    /// `sum_k gamma_k`; `R_G = gamma_sum I_N`.
    pub gamma_sum: f64,
}

impl EstimationContext {
    pub fn from_config(config: &SystemConfig) -> Self {
        EstimationContext {
            m: config.m,
            k: config.k,
            t: config.t,
            snr: config.snr(),
            beta: config.beta,
            gamma_sum: config.gamma_sum(),
        }
    }

    /// Information scale `T Gamma / K` of the projected HRIS observation.
    pub fn hris_gain(&self) -> f64 {
        self.t as f64 * self.snr / self.k as f64
    }

    /// Per-entry projected noise variance `(T Gamma)^{-1}`.
    pub fn projected_noise(&self) -> f64 {
        1.0 / (self.t as f64 * self.snr)
    }
}

/// `R_G̃ = (R_G^{-1} I + c A^H A)^{-1}`.
pub fn error_covariance(a_rc: &CMat, gamma_sum: f64, hris_gain: f64) -> Result<CMat> {
    let n = a_rc.ncols();
    if gamma_sum == 0.0 {
        return Ok(CMat::zeros(n, n));
    }
    if !(gamma_sum > 0.0) || !(hris_gain > 0.0) {
        return Err(HrisError::Domain("prior scale and SNR must be positive".into()));
    }
    let info = identity(n) * c(1.0 / gamma_sum) + a_rc.adjoint() * a_rc * c(hris_gain);
    hpd_inverse(&info)
}

/// `eps_G = Tr{(R_G^{-1} + (T Gamma / K) A_RC^H A_RC)^{-1}}`.
pub fn analytic_mse_g(params: &HrisParams, gammas: &[f64], t: usize, snr: f64, k: usize) -> Result<f64> {
    let gain = t as f64 * snr / k as f64;
    let e = error_covariance(&stack_reception(params), gammas.iter().sum(), gain)?;
    Ok(trace(&e).re)
}

/// Covariance of the BS effective noise, `D = D_B ⊗ I_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveNoiseCov {
    /// `B x B` block scalars: block `(i, j)` of `D` is `blocks[(i, j)] I_K`.
    pub blocks: CMat,
    /// Block size `K`.
    pub k: usize,
}

impl EffectiveNoiseCov {
    pub fn subframes(&self) -> usize {
        self.blocks.nrows()
    }

    /// The full `BK x BK` matrix.
    pub fn dense(&self) -> CMat {
        kron(&self.blocks, &identity(self.k))
    }

    /// `D_B^{-1}`; `D^{-1} = D_B^{-1} ⊗ I_K`.
    pub fn block_inverse(&self) -> Result<CMat> {
        hpd_inverse(&self.blocks).map_err(|_| HrisError::Numerical("effective noise covariance D is singular".into()))
    }
}

/// `[D]_ij = (beta/K) Tr(Psi(j)^H Psi(i) R_G̃) I_K + [i = j] (T Gamma)^{-1} I_K`.
pub fn noise_cov_d(params: &HrisParams, r_err: &CMat, beta: f64, t: usize, snr: f64, k: usize) -> EffectiveNoiseCov {
    let p = reflection_table(params);
    let diag_e: Vec<f64> = r_err.diagonal().iter().map(|z| z.re).collect();
    EffectiveNoiseCov { blocks: d_blocks(&p, &diag_e, beta, k, 1.0 / (t as f64 * snr)), k }
}

pub(crate) fn d_blocks(p: &CMat, diag_e: &[f64], beta: f64, k: usize, noise: f64) -> CMat {
    let weighted = CMat::from_fn(p.nrows(), p.ncols(), |b, l| p[(b, l)] * diag_e[l]);
    let mut d = &weighted * p.adjoint() * c(beta / k as f64);
    for i in 0..d.nrows() {
        d[(i, i)] += noise;
    }
    hermitize(&d)
}

/// `eps_H = Tr{((1/beta) I_MN + (K sum_ij Tr([D^{-T}]_ij) Psi(i) Sigma Psi(j)^H)^T ⊗ I_M)^{-1}}`.
///
/// This is a Jensen lower bound on the BS-side MSE.
pub fn analytic_mse_h(params: &HrisParams, sigma: &CMat, d: &EffectiveNoiseCov, beta: f64, m: usize, k: usize) -> Result<f64> {
    let n = params.elements();
    if beta == 0.0 {
        return Ok(0.0);
    }
    if !(beta > 0.0) {
        return Err(HrisError::Domain(format!("beta = {beta} must be non-negative")));
    }
    let p = reflection_table(params);
    let w = d.block_inverse()?.transpose();
    let q = weighted_information(sigma, &p, &w, k);
    let f = identity(n) * c(1.0 / beta) + q;
    Ok(m as f64 * trace(&hpd_inverse(&f)?).re)
}

/// `P^T W conj(P)`.
pub(crate) fn reflection_cross(p: &CMat, w: &CMat) -> CMat {
    p.transpose() * w * p.conjugate()
}

/// `Q = K^2 Sigma ∘ (P^T W conj(P))`.
pub(crate) fn weighted_information(sigma: &CMat, p: &CMat, w: &CMat, k: usize) -> CMat {
    let cross = reflection_cross(p, w);
    sigma.component_mul(&cross) * c((k * k) as f64)
}

/// Every intermediate of the `eps_G` / `eps_H` evaluation, kept for the
/// reverse pass of the optimizer gradient.
#[derive(Debug, Clone)]
pub struct MseTerms {
    pub a_rc: CMat,
    /// `R_G̃`.
    pub r_err: CMat,
    /// `Sigma = R_G - R_G̃`.
    pub sigma: CMat,
    /// Reflection table `P` (`B x N`).
    pub refl: CMat,
    pub d: EffectiveNoiseCov,
    /// `D_B^{-1}`.
    pub d_inv: CMat,
    /// `W = D_B^{-T}`.
    pub w: CMat,
    /// `P^T W conj(P)`.
    pub cross: CMat,
    pub q: CMat,
    /// `(I/beta + Q)^{-1}`.
    pub f_inv: CMat,
    pub eps_g: f64,
    pub eps_h: f64,
}

impl MseTerms {
    pub fn evaluate(params: &HrisParams, ctx: &EstimationContext) -> Result<Self> {
        if !(ctx.beta > 0.0) || !(ctx.gamma_sum > 0.0) || !(ctx.snr > 0.0) {
            return Err(HrisError::Domain("closed-form pipeline needs beta, sum gamma and Gamma > 0".into()));
        }
        let n = params.elements();
        let a_rc = stack_reception(params);
        let r_err = error_covariance(&a_rc, ctx.gamma_sum, ctx.hris_gain())?;
        let sigma = identity(n) * c(ctx.gamma_sum) - &r_err;
        let refl = reflection_table(params);
        let diag_e: Vec<f64> = r_err.diagonal().iter().map(|z| z.re).collect();
        let d = EffectiveNoiseCov { blocks: d_blocks(&refl, &diag_e, ctx.beta, ctx.k, ctx.projected_noise()), k: ctx.k };
        let d_inv = d.block_inverse()?;
        let w = d_inv.transpose();
        let cross = reflection_cross(&refl, &w);
        let q = sigma.component_mul(&cross) * c((ctx.k * ctx.k) as f64);
        let f_inv = hpd_inverse(&(identity(n) * c(1.0 / ctx.beta) + &q))?;
        let eps_g = trace(&r_err).re;
        let eps_h = ctx.m as f64 * trace(&f_inv).re;
        Ok(MseTerms { a_rc, r_err, sigma, refl, d, d_inv, w, cross, q, f_inv, eps_g, eps_h })
    }

    pub fn sum_mse(&self) -> f64 {
        self.eps_g + self.eps_h
    }
}
