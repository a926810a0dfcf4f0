//! Cascaded NMSE versus SNR, pilot length and RF chain count.

use std::time::Instant;

use hris_core::estimators::min_pilot_length;
use hris_core::SystemConfig;

use crate::baselines::configure;
use crate::config::{CurveKind, ExperimentConfig};
use crate::error::Result;
use crate::output::Table;

use super::{evaluate, purpose, result_row, result_table, RowLabels};

fn grid(exp: &ExperimentConfig, kind: CurveKind) -> Vec<f64> {
    match kind {
        CurveKind::Snr => exp.sweeps.snr_grid_db.clone(),
        CurveKind::Pilot => exp.sweeps.pilot_grid.iter().map(|&t| t as f64).collect(),
        CurveKind::Rfchain => exp.sweeps.rfchain_grid.iter().map(|&r| r as f64).collect(),
    }
}

fn at(base: &SystemConfig, kind: CurveKind, value: f64) -> SystemConfig {
    let mut c = base.clone();
    match kind {
        CurveKind::Snr => c.gamma_db = value,
        CurveKind::Pilot => c.b = value as usize / c.t,
        CurveKind::Rfchain => c.n_r = value as usize,
    }
    c
}

pub fn run_curves(exp: &ExperimentConfig) -> Result<Table> {
    let base = exp.scenario.system(exp.derived_seed(purpose::POSITIONS))?;
    let mut table = result_table();
    for &kind in &exp.sweeps.curves {
        let values = grid(exp, kind);
        if values.is_empty() {
            log::warn!("no grid for the {} curve; skipped", kind.label());
        }
        for value in values {
            let system = at(&base, kind, value);
            system.validate()?;
            if system.tau() < min_pilot_length(system.n, system.k, system.n_r) {
                log::warn!("{} = {value}: tau = {} is below the identifiability bound", kind.label(), system.tau());
            }
            let topology = exp.scenario.topology.topology(system.n, system.n_r);
            for &baseline in &exp.sweeps.baselines {
                let started = Instant::now();
                let seed = exp.derived_seed(match baseline {
                    crate::baselines::Baseline::RandomParams => purpose::RANDOM_PARAMS,
                    _ => purpose::OPTIMIZER,
                });
                let configured = configure(baseline, &system, &topology, &exp.optimizer, seed)?;
                let eval = evaluate(exp, &system, &configured.params, exp.trials)?;
                let labels = RowLabels {
                    sweep: "curves",
                    param: kind.label(),
                    value: value.to_string(),
                    baseline: baseline.to_string(),
                    iterations: configured.outcome.as_ref().map(|o| o.iterations()),
                };
                table.push(result_row(labels, &system, &eval, started));
            }
        }
    }
    Ok(table)
}
