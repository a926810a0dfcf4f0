//! Monte Carlo checks of the closed-form MSEs on the configured scenario.

use std::time::Instant;

use hris_core::estimators::{EstimationContext, MseTerms};
use hris_core::hris::HrisParams;
use hris_core::SystemConfig;

use crate::baselines::{configure, random_params, Baseline};
use crate::config::ExperimentConfig;
use crate::error::{ExperimentError, Result};
use crate::output::{num, Table, WALL_TIME};

use super::{evaluate, purpose};

pub const VALIDATE_SCHEMA: &str = "hris-validate-v1";

/// Dimension above which the checks get slow.
const LARGE_N: usize = 16;

#[derive(Debug, Clone)]
pub struct ValidateReport {
    pub table: Table,
    /// Labels of the failed checks.
    pub failures: Vec<String>,
}

impl ValidateReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

struct Check {
    name: &'static str,
    params: &'static str,
    analytic: f64,
    empirical: f64,
    std_err: f64,
    criterion: String,
    pass: bool,
    trials: usize,
}

fn g_match(name: &'static str, params: &'static str, analytic: f64, mc: &crate::montecarlo::MonteCarlo, tol: f64) -> Check {
    let ratio = mc.g_err.mean() / analytic;
    Check {
        name,
        params,
        analytic,
        empirical: mc.g_err.mean(),
        std_err: mc.g_err.std_err(),
        criterion: format!("|empirical/analytic - 1| < {tol}"),
        pass: (ratio - 1.0).abs() < tol,
        trials: mc.trials(),
    }
}

fn h_bound(params: &'static str, analytic: f64, mc: &crate::montecarlo::MonteCarlo, slack: f64) -> Check {
    Check {
        name: "h-lower-bound",
        params,
        analytic,
        empirical: mc.h_err.mean(),
        std_err: mc.h_err.std_err(),
        criterion: format!("empirical >= {} * analytic", 1.0 - slack),
        pass: mc.h_err.mean() >= (1.0 - slack) * analytic,
        trials: mc.trials(),
    }
}

fn no_reflection(system: &SystemConfig, base: &HrisParams) -> Result<Check> {
    let mut p = base.clone();
    p.rho.fill(0.0);
    let terms = MseTerms::evaluate(&p, &EstimationContext::from_config(system))?;
    let prior = system.beta * (system.m * system.n) as f64;
    Ok(Check {
        name: "h-prior-without-reflection",
        params: "rho=0",
        analytic: terms.eps_h,
        empirical: prior,
        std_err: f64::NAN,
        criterion: "analytic == beta M N".into(),
        pass: (terms.eps_h - prior).abs() <= 1e-12 * prior,
        trials: 0,
    })
}

pub fn run_validate(exp: &ExperimentConfig) -> Result<ValidateReport> {
    if exp.trials == 0 {
        return Err(ExperimentError::Config("validate needs trials >= 1".into()));
    }
    let system = exp.scenario.system(exp.derived_seed(purpose::POSITIONS))?;
    if system.n > LARGE_N {
        log::warn!("validate on N = {} elements; the Monte Carlo checks will be slow", system.n);
    }
    let topology = exp.scenario.topology();
    let tol = exp.validate.g_tolerance;
    let slack = exp.validate.h_bound_slack;
    let mut table = Table::new(
        VALIDATE_SCHEMA,
        vec!["check", "params", "analytic", "empirical", "std_err", "ratio", "criterion", "pass", "trials", WALL_TIME],
    );
    let mut failures = Vec::new();
    let mut emit = |check: Check, started: Instant| {
        if !check.pass {
            failures.push(format!("{} ({})", check.name, check.params));
        }
        table.push(vec![
            check.name.into(),
            check.params.into(),
            num(check.analytic),
            num(check.empirical),
            num(check.std_err),
            num(check.empirical / check.analytic),
            check.criterion,
            check.pass.to_string(),
            check.trials.to_string(),
            num(started.elapsed().as_secs_f64()),
        ]);
    };

    let started = Instant::now();
    let random = random_params(&system, &topology, exp.derived_seed(purpose::RANDOM_PARAMS))?;
    let eval = evaluate(exp, &system, &random, exp.trials)?;
    let mc = eval.mc.as_ref().expect("trials > 0");
    emit(g_match("g-matches-analytic", "random-params", eval.terms.eps_g, mc, tol), started);
    emit(h_bound("random-params", eval.terms.eps_h, mc, slack), started);

    let started = Instant::now();
    let tuned = configure(Baseline::Optimized, &system, &topology, &exp.optimizer, exp.derived_seed(purpose::OPTIMIZER))?;
    let eval = evaluate(exp, &system, &tuned.params, exp.trials)?;
    let mc = eval.mc.as_ref().expect("trials > 0");
    emit(g_match("g-matches-analytic", "optimized", eval.terms.eps_g, mc, tol), started);
    emit(h_bound("optimized", eval.terms.eps_h, mc, slack), started);

    let started = Instant::now();
    let mut sensing_off = random.clone();
    sensing_off.rho.fill(1.0 - 1e-6);
    let eval = evaluate(exp, &system, &sensing_off, exp.trials)?;
    let mc = eval.mc.as_ref().expect("trials > 0");
    let prior = system.n as f64 * system.gamma_sum();
    emit(g_match("g-prior-without-sensing", "rho=1-1e-6", prior, mc, tol), started);

    let started = Instant::now();
    emit(no_reflection(&system, &random)?, started);

    Ok(ValidateReport { table, failures })
}
