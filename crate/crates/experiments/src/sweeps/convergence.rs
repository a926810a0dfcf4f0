//! Optimizer traces from several random initializations.

use std::time::Instant;

use hris_core::optimizer::{optimize, ParamLayout, StopReason};
use hris_core::rng;

use crate::baselines::{objective, random_params};
use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output::{num, Table, WALL_TIME};

use super::purpose;

pub const TRACE_SCHEMA: &str = "hris-trace-v1";

/// Relative loss change over the last `window` iterations of a trace.
pub fn tail_change(losses: &[f64], window: usize) -> f64 {
    let last = losses[losses.len() - 1];
    let first = losses[losses.len().saturating_sub(window + 1)];
    (first - last).abs() / last.abs()
}

fn stop_label(stop: &StopReason) -> String {
    match stop {
        StopReason::Converged => "converged".into(),
        StopReason::MaxIterations => "max-iterations".into(),
        StopReason::Stationary => "stationary".into(),
        StopReason::NoProgress => "no-progress".into(),
        StopReason::Aborted(e) => format!("aborted: {e}"),
    }
}

pub fn run_convergence(exp: &ExperimentConfig) -> Result<Table> {
    let inits = exp.sweeps.convergence_inits;
    if inits < 2 {
        return Err(ExperimentError::Config("convergence needs at least 2 initializations".into()));
    }
    let system = exp.scenario.system(exp.derived_seed(purpose::POSITIONS))?;
    let topology = exp.scenario.topology();
    let settings = exp.optimizer.settings();
    let mut table = Table::new(
        TRACE_SCHEMA,
        vec!["init", "iteration", "loss", "objective", "barrier", "step", "lambda", "stop", "tail_change_10", WALL_TIME],
    );
    for init in 0..inits {
        let started = Instant::now();
        let start = random_params(&system, &topology, rng::derive(exp.derived_seed(purpose::INITS), init as u64))?;
        let layout = ParamLayout::of(&start);
        let x0 = layout.pack(&start)?.x;
        let obj = objective(&system, layout, &exp.optimizer);
        let out = optimize(&obj, &x0, &settings)?;
        let losses: Vec<f64> = out.trace.iter().map(|r| r.loss).collect();
        let tail = tail_change(&losses, 10);
        let stop = stop_label(&out.stop);
        if matches!(out.stop, StopReason::Aborted(_)) {
            log::warn!("initialization {init}: {stop}");
        }
        let elapsed = num(started.elapsed().as_secs_f64());
        for r in &out.trace {
            table.push(vec![
                init.to_string(),
                r.iteration.to_string(),
                num(r.loss),
                num(r.objective),
                num(r.barrier),
                num(r.step),
                num(out.lambda),
                stop.clone(),
                num(tail),
                elapsed.clone(),
            ]);
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tail_change_uses_the_window() {
        let l = [10.0, 5.0, 4.0, 4.0];
        assert_eq!(tail_change(&l, 2), 0.25);
        assert_eq!(tail_change(&l, 10), 1.5);
    }
}
