//! Channel estimators and their closed-form MSEs.
//!
//! `G` is estimated at the HRIS from its receive-chain outputs, `H` at the
//! BS from the reflected signal and the estimate `Ĝ` conveyed by the HRIS.
//! The BS treats the part of the signal caused by `G - Ĝ` as colored noise
//! with covariance `D ⊗ I_M`.

mod lmmse;
mod metrics;
pub mod mse;
mod noise_free;

pub use lmmse::{lmmse_g, lmmse_h, GEstimate, HEstimate};
pub use metrics::{cascaded_nmse, CascadedError};
pub use mse::{
    analytic_mse_g, analytic_mse_h, error_covariance, noise_cov_d, EffectiveNoiseCov, EstimationContext, MseTerms,
};
pub use noise_free::{min_pilot_length, recover_g_noisefree, recover_h_noisefree};
