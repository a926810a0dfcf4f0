//! Shared power-splitting sweep: every element and sub-frame uses the same
//! `rho`, with phases either optimized or random.

use std::time::Instant;

use crate::baselines::{optimize_params, random_params};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::Table;

use super::{evaluate, purpose, result_row, result_table, RowLabels};

pub const OPTIMIZED_PHASE: &str = "optimized-phase";
pub const RANDOM_PHASE: &str = "random-phase";

pub fn run_rho_sweep(exp: &ExperimentConfig) -> Result<Table> {
    let system = exp.scenario.system(exp.derived_seed(purpose::POSITIONS))?;
    let topology = exp.scenario.topology();
    let mut table = result_table();
    for &rho in &exp.sweeps.rho_grid {
        let started = Instant::now();
        let tuned = optimize_params(&system, &topology, &exp.optimizer, exp.derived_seed(purpose::OPTIMIZER), Some(rho))?;
        let iterations = tuned.outcome.as_ref().map(|o| o.iterations());
        let eval = evaluate(exp, &system, &tuned.params, exp.trials)?;
        let labels = RowLabels { sweep: "rho-sweep", param: "rho", value: rho.to_string(), baseline: OPTIMIZED_PHASE.into(), iterations };
        table.push(result_row(labels, &system, &eval, started));

        let started = Instant::now();
        let mut random = random_params(&system, &topology, exp.derived_seed(purpose::RANDOM_PARAMS))?;
        random.rho.fill(rho);
        let eval = evaluate(exp, &system, &random, exp.trials)?;
        let labels = RowLabels { sweep: "rho-sweep", param: "rho", value: rho.to_string(), baseline: RANDOM_PHASE.into(), iterations: None };
        table.push(result_row(labels, &system, &eval, started));
    }
    Ok(table)
}
