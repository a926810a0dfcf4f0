//! One Monte Carlo trial of the full two-stage estimation chain.

use crate::channel::{sample_channels, ChannelRealization, SystemConfig};
use crate::error::Result;
use crate::estimators::{lmmse_g, lmmse_h, noise_cov_d, CascadedError, GEstimate, HEstimate};
use crate::hris::{reflection_matrices, stack_reception, HrisParams};
use crate::linalg::frobenius_sq;
use crate::pilots::{project_pilots, simulate_uplink, PilotMatrix};

/// Squared errors and energies of one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialOutcome {
    pub g_err: f64,
    pub h_err: f64,
    pub g_energy: f64,
    pub h_energy: f64,
    pub cascaded: CascadedError,
}

/// Everything a trial produces, for callers that need the estimates.
#[derive(Debug, Clone)]
pub struct TrialDetail {
    pub channels: ChannelRealization,
    pub g: GEstimate,
    pub h: HEstimate,
    pub outcome: TrialOutcome,
}

/// Draw channels and noise from `seed`, estimate `G` at the HRIS, then `H`
/// at the BS from the conveyed `Ĝ` (or the true `G` when `genie_g`).
/// Thermal noise has unit variance; the SNR sets the transmit amplitude.
pub fn run_trial_detailed(
    config: &SystemConfig,
    params: &HrisParams,
    pilots: &PilotMatrix,
    seed: u64,
    genie_g: bool,
) -> Result<TrialDetail> {
    let channels = sample_channels(config, seed);
    let obs = simulate_uplink(&channels, params, pilots, config, 1.0, seed)?;
    let proj = project_pilots(&obs, pilots)?;
    let snr = config.snr();
    let g = lmmse_g(&proj.ytilde_rc, &stack_reception(params), &config.gammas, config.t, snr, config.k)?;
    let d = noise_cov_d(params, &g.r_err, config.beta, config.t, snr, config.k);
    let conveyed = if genie_g { &channels.g } else { &g.g_hat };
    let h = lmmse_h(&proj.stacked_bs(), config.m, conveyed, &reflection_matrices(params), &d, config.beta)?;
    let outcome = TrialOutcome {
        g_err: frobenius_sq(&(&g.g_hat - &channels.g)),
        h_err: frobenius_sq(&(&h.h_hat - &channels.h)),
        g_energy: frobenius_sq(&channels.g),
        h_energy: frobenius_sq(&channels.h),
        cascaded: CascadedError::new(&h.h_hat, &g.g_hat, &channels.h, &channels.g)?,
    };
    Ok(TrialDetail { channels, g, h, outcome })
}

pub fn run_trial(config: &SystemConfig, params: &HrisParams, pilots: &PilotMatrix, seed: u64) -> Result<TrialOutcome> {
    Ok(run_trial_detailed(config, params, pilots, seed, false)?.outcome)
}
