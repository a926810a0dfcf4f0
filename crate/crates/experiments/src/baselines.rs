//! The surface configurations compared by the sweeps.

use std::fmt;
use std::str::FromStr;

use hris_core::estimators::EstimationContext;
use hris_core::hris::{ConnectionTopology, HrisParams};
use hris_core::optimizer::{optimize, OptimizeOutcome, ParamLayout, SumMseObjective};
use hris_core::rng;
use hris_core::SystemConfig;
use serde::{Deserialize, Serialize};

use crate::config::OptimizerConfig;
use crate::error::{ExperimentError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Baseline {
    /// All parameters optimized on the scenario topology.
    Optimized,
    /// Interior random parameters.
    RandomParams,
    /// Optimized, with element `l` wired to chain `l mod N_r` only.
    PartialConnection,
    /// `rho` held at the value, phases optimized.
    FixedRho(f64),
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Baseline::Optimized => write!(f, "optimized"),
            Baseline::RandomParams => write!(f, "random-params"),
            Baseline::PartialConnection => write!(f, "partial-connection"),
            Baseline::FixedRho(r) => write!(f, "fixed-rho:{r}"),
        }
    }
}

impl FromStr for Baseline {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimized" => Ok(Baseline::Optimized),
            "random-params" => Ok(Baseline::RandomParams),
            "partial-connection" => Ok(Baseline::PartialConnection),
            other => {
                let value = other
                    .strip_prefix("fixed-rho:")
                    .and_then(|v| v.parse::<f64>().ok())
                    .filter(|v| *v > 0.0 && *v < 1.0)
                    .ok_or_else(|| ExperimentError::Config(format!("unknown baseline `{other}`")))?;
                Ok(Baseline::FixedRho(value))
            }
        }
    }
}

impl TryFrom<String> for Baseline {
    type Error = ExperimentError;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Baseline> for String {
    fn from(b: Baseline) -> String {
        b.to_string()
    }
}

/// A configured surface. `outcome` is set when the optimizer produced it.
#[derive(Debug, Clone)]
pub struct Configured {
    pub params: HrisParams,
    pub outcome: Option<OptimizeOutcome>,
}

pub fn objective(config: &SystemConfig, layout: ParamLayout, opt: &OptimizerConfig) -> SumMseObjective {
    SumMseObjective::new(EstimationContext::from_config(config), layout).with_weights(opt.w_h, opt.w_g)
}

/// Random interior parameters drawn from `seed`. Draws are nested, so a
/// grid over `B` or `N_r` with a fixed seed extends one configuration.
pub fn random_params(config: &SystemConfig, topology: &ConnectionTopology, seed: u64) -> Result<HrisParams> {
    Ok(HrisParams::random_nested(seed, config.b, config.n, config.n_r, topology)?)
}

/// Run the optimizer from `opt.restarts` random starts (start `i` drawn from
/// `derive(seed, i)`) and keep the lowest final loss. With `fix_rho` every
/// start has that `rho` and only the phases move.
pub fn optimize_params(
    config: &SystemConfig,
    topology: &ConnectionTopology,
    opt: &OptimizerConfig,
    seed: u64,
    fix_rho: Option<f64>,
) -> Result<Configured> {
    let mut best: Option<Configured> = None;
    for restart in 0..opt.restarts {
        let mut start = random_params(config, topology, rng::derive(seed, restart as u64))?;
        if let Some(rho) = fix_rho {
            start.rho.fill(rho);
        }
        let layout = ParamLayout::of(&start);
        let x0 = layout.pack(&start)?.x;
        let mut settings = opt.settings();
        if fix_rho.is_some() {
            settings.frozen = (0..layout.len()).filter(|&i| layout.coordinate(i).is_rho()).collect();
        }
        let obj = objective(config, layout.clone(), opt);
        let outcome = optimize(&obj, &x0, &settings)?;
        let params = layout.unpack(&hris_core::ParamVector { x: outcome.x.clone() })?;
        if best.as_ref().is_none_or(|b| outcome.final_loss() < b.outcome.as_ref().unwrap().final_loss()) {
            best = Some(Configured { params, outcome: Some(outcome) });
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Parameters for `baseline` on `config`, with the scenario topology
/// `topology` used by every baseline except the partial connection.
pub fn configure(
    baseline: Baseline,
    config: &SystemConfig,
    topology: &ConnectionTopology,
    opt: &OptimizerConfig,
    seed: u64,
) -> Result<Configured> {
    match baseline {
        Baseline::Optimized => optimize_params(config, topology, opt, seed, None),
        Baseline::PartialConnection => {
            optimize_params(config, &ConnectionTopology::round_robin(config.n, config.n_r), opt, seed, None)
        }
        Baseline::FixedRho(rho) => optimize_params(config, topology, opt, seed, Some(rho)),
        Baseline::RandomParams => Ok(Configured { params: random_params(config, topology, seed)?, outcome: None }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for b in [Baseline::Optimized, Baseline::RandomParams, Baseline::PartialConnection, Baseline::FixedRho(0.25)] {
            assert_eq!(b.to_string().parse::<Baseline>().unwrap(), b);
        }
        assert!("fixed-rho:1.5".parse::<Baseline>().is_err());
        assert!("best".parse::<Baseline>().is_err());
    }
}
