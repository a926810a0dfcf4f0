//! Parallel Monte Carlo over trials with an ordered reduction.

use hris_core::hris::HrisParams;
use hris_core::pilots::PilotMatrix;
use hris_core::rng;
use hris_core::trial::{run_trial_detailed, TrialOutcome};
use hris_core::SystemConfig;
use rayon::prelude::*;

use crate::error::Result;
use crate::stats::{MeanStat, RatioStat};

/// Per-trial statistics of one configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MonteCarlo {
    /// `E||G - Ĝ||^2`.
    pub g_err: MeanStat,
    pub h_err: MeanStat,
    /// `E||G - Ĝ||^2 / E||G||^2`.
    pub g_nmse: RatioStat,
    pub h_nmse: RatioStat,
    pub cascaded: RatioStat,
}

impl MonteCarlo {
    pub fn trials(&self) -> usize {
        self.g_err.count()
    }

    fn push(&mut self, o: &TrialOutcome) {
        self.g_err.push(o.g_err);
        self.h_err.push(o.h_err);
        self.g_nmse.push(o.g_err, o.g_energy);
        self.h_nmse.push(o.h_err, o.h_energy);
        self.cascaded.push(o.cascaded.num, o.cascaded.den);
    }
}

/// Source of the channel statistics of each trial.
pub trait TrialConfig: Sync {
    fn config(&self, trial: u64) -> Result<SystemConfig>;
}

impl TrialConfig for SystemConfig {
    fn config(&self, _: u64) -> Result<SystemConfig> {
        Ok(self.clone())
    }
}

/// Run `trials` trials; trial `i` draws everything from `derive(seed, i)`.
/// Trials run on the rayon pool and are reduced in index order, so the
/// result does not depend on the thread count.
pub fn run(
    source: &dyn TrialConfig,
    params: &HrisParams,
    pilots: &PilotMatrix,
    trials: usize,
    seed: u64,
    genie_g: bool,
) -> Result<MonteCarlo> {
    let outcomes: Vec<TrialOutcome> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let config = source.config(i)?;
            Ok(run_trial_detailed(&config, params, pilots, rng::derive(seed, i), genie_g)?.outcome)
        })
        .collect::<Result<_>>()?;
    let mut mc = MonteCarlo::default();
    for o in &outcomes {
        mc.push(o);
    }
    Ok(mc)
}
