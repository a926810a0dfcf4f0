//! The four experiment commands. Each returns a [`Table`].

mod convergence;
mod curves;
mod rho;
mod validate;

pub use convergence::run_convergence;
pub use curves::run_curves;
pub use rho::run_rho_sweep;
pub use validate::{run_validate, ValidateReport};

use std::time::Instant;

use hris_core::estimators::{min_pilot_length, EstimationContext, MseTerms};
use hris_core::hris::HrisParams;
use hris_core::pilots::generate_pilots;
use hris_core::rng;
use hris_core::SystemConfig;

use crate::config::{ExperimentConfig, ScenarioConfig};
use crate::error::Result;
use crate::montecarlo::{self, MonteCarlo, TrialConfig};
use crate::output::{num, Table, WALL_TIME};

/// Labels for seeds derived from the experiment seed.
pub mod purpose {
    pub const TRIALS: u64 = 1;
    pub const OPTIMIZER: u64 = 2;
    pub const RANDOM_PARAMS: u64 = 3;
    pub const INITS: u64 = 4;
    pub const POSITIONS: u64 = 5;
}

pub const RESULT_SCHEMA: &str = "hris-result-v1";

pub(crate) const RESULT_COLUMNS: [&str; 21] = [
    "sweep",
    "sweep_param",
    "sweep_value",
    "baseline",
    "feasible",
    "tau",
    "min_pilot_length",
    "eps_g",
    "eps_h",
    "sum_mse",
    "eps_g_norm",
    "eps_h_norm",
    "nmse_g",
    "nmse_g_se",
    "nmse_h",
    "nmse_h_se",
    "nmse_cascaded",
    "nmse_cascaded_se",
    "trials",
    "optimizer_iterations",
    WALL_TIME,
];

pub(crate) fn result_table() -> Table {
    Table::new(RESULT_SCHEMA, RESULT_COLUMNS.to_vec())
}

/// Per-trial channel statistics when user positions are redrawn.
struct RedrawnPositions<'a> {
    scenario: &'a ScenarioConfig,
    base: SystemConfig,
    seed: u64,
}

impl TrialConfig for RedrawnPositions<'_> {
    fn config(&self, trial: u64) -> Result<SystemConfig> {
        let mut c = self.scenario.system(rng::derive(self.seed, trial))?;
        // the sweep may have changed dimensions or SNR; only take the path losses
        let mut out = self.base.clone();
        out.beta = c.beta;
        out.gammas = std::mem::take(&mut c.gammas);
        Ok(out)
    }
}

/// One evaluated configuration.
pub(crate) struct Evaluated {
    pub terms: MseTerms,
    /// `w_h eps_h + w_g eps_g` with the optimizer weights.
    pub weighted: f64,
    pub mc: Option<MonteCarlo>,
}

pub(crate) fn evaluate(exp: &ExperimentConfig, system: &SystemConfig, params: &HrisParams, trials: usize) -> Result<Evaluated> {
    let terms = MseTerms::evaluate(params, &EstimationContext::from_config(system))?;
    let mc = if trials == 0 {
        None
    } else {
        let pilots = generate_pilots(system.k, system.t)?;
        let seed = exp.derived_seed(purpose::TRIALS);
        let redraw = RedrawnPositions { scenario: &exp.scenario, base: system.clone(), seed: exp.derived_seed(purpose::POSITIONS) };
        let source: &dyn TrialConfig = if exp.scenario.redraws_positions() { &redraw } else { system };
        Some(montecarlo::run(source, params, &pilots, trials, seed, exp.scenario.genie_g)?)
    };
    let weighted = exp.optimizer.w_h * terms.eps_h + exp.optimizer.w_g * terms.eps_g;
    Ok(Evaluated { terms, weighted, mc })
}

pub(crate) struct RowLabels<'a> {
    pub sweep: &'a str,
    pub param: &'a str,
    pub value: String,
    pub baseline: String,
    pub iterations: Option<usize>,
}

pub(crate) fn result_row(labels: RowLabels<'_>, system: &SystemConfig, eval: &Evaluated, started: Instant) -> Vec<String> {
    let t = &eval.terms;
    let tau = system.tau();
    let tau_min = min_pilot_length(system.n, system.k, system.n_r);
    let prior_g = system.n as f64 * system.gamma_sum();
    let prior_h = system.beta * (system.m * system.n) as f64;
    let (empirical, trials) = match &eval.mc {
        Some(mc) => (
            vec![
                num(mc.g_nmse.ratio()),
                num(mc.g_nmse.std_err()),
                num(mc.h_nmse.ratio()),
                num(mc.h_nmse.std_err()),
                num(mc.cascaded.ratio()),
                num(mc.cascaded.std_err()),
            ],
            mc.trials(),
        ),
        None => (vec![String::new(); 6], 0),
    };
    let mut row = vec![
        labels.sweep.to_string(),
        labels.param.to_string(),
        labels.value,
        labels.baseline,
        (tau >= tau_min).to_string(),
        tau.to_string(),
        tau_min.to_string(),
        num(t.eps_g),
        num(t.eps_h),
        num(eval.weighted),
        num(t.eps_g / prior_g),
        num(t.eps_h / prior_h),
    ];
    row.extend(empirical);
    row.push(trials.to_string());
    row.push(labels.iterations.map(|i| i.to_string()).unwrap_or_default());
    row.push(num(started.elapsed().as_secs_f64()));
    row
}
