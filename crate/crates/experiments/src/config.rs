//! Experiment configuration, read from TOML.
//!
//! Physical quantities carry their unit in the key name (`gamma_db`,
//! `user_radius_m`, ...). Path losses are linear power gains.

use std::path::{Path, PathBuf};

use hris_core::channel::{
    scenario_geometry, Geometry, PathLossModel, Point, DEFAULT_HRIS_POSITION, DEFAULT_USER_CENTER,
    DEFAULT_USER_RADIUS,
};
use hris_core::hris::ConnectionTopology;
use hris_core::optimizer::{OptimizerSettings, StepRule};
use hris_core::rng;
use hris_core::SystemConfig;
use serde::{Deserialize, Serialize};

use crate::baselines::Baseline;
use crate::error::{ExperimentError, Result};

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(ExperimentError::Config(msg.into()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    /// Monte Carlo trials per row; 0 reports analytic values only.
    pub trials: usize,
    pub output_dir: Option<PathBuf>,
    pub scenario: ScenarioConfig,
    #[serde(default)]
    pub optimizer: OptimizerConfig,
    #[serde(default)]
    pub sweeps: SweepConfig,
    #[serde(default)]
    pub validate: ValidateConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TopologyKind {
    FullyConnected,
    /// Element `l` feeds chain `l mod N_r`.
    PartiallyConnected,
}

impl TopologyKind {
    pub fn topology(self, n: usize, n_r: usize) -> ConnectionTopology {
        match self {
            TopologyKind::FullyConnected => ConnectionTopology::FullyConnected,
            TopologyKind::PartiallyConnected => ConnectionTopology::round_robin(n, n_r),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub bs_antennas: usize,
    pub elements: usize,
    pub rf_chains: usize,
    pub users: usize,
    pub slots_per_subframe: usize,
    pub subframes: usize,
    pub gamma_db: f64,
    #[serde(default = "default_topology")]
    pub topology: TopologyKind,
    /// Feed the true `G` to the BS stage instead of the conveyed `Ĝ`.
    #[serde(default)]
    pub genie_g: bool,
    /// Explicit path losses; exclusive with `geometry`.
    pub channel: Option<FixedChannel>,
    pub geometry: Option<GeometryConfig>,
}

fn default_topology() -> TopologyKind {
    TopologyKind::FullyConnected
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedChannel {
    pub beta: f64,
    /// One value per user, or a single value shared by all.
    pub gammas: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default = "default_hris")]
    pub hris_position_m: Point,
    #[serde(default = "default_center")]
    pub user_center_m: Point,
    #[serde(default = "default_radius")]
    pub user_radius_m: f64,
    #[serde(default = "default_alpha_h")]
    pub alpha_hris_bs: f64,
    #[serde(default = "default_alpha_g")]
    pub alpha_user_hris: f64,
    /// Path loss at the reference distance (linear).
    #[serde(default = "default_lambda0")]
    pub reference_gain: f64,
    #[serde(default = "default_d0")]
    pub reference_distance_m: f64,
    /// Draw fresh user positions for every trial.
    #[serde(default)]
    pub redraw_positions: bool,
}

fn default_hris() -> Point {
    DEFAULT_HRIS_POSITION
}
fn default_center() -> Point {
    DEFAULT_USER_CENTER
}
fn default_radius() -> f64 {
    DEFAULT_USER_RADIUS
}
fn default_alpha_h() -> f64 {
    PathLossModel::default().alpha_h
}
fn default_alpha_g() -> f64 {
    PathLossModel::default().alpha_g
}
fn default_lambda0() -> f64 {
    PathLossModel::default().lambda0
}
fn default_d0() -> f64 {
    PathLossModel::default().d0
}

impl GeometryConfig {
    pub fn model(&self) -> PathLossModel {
        PathLossModel {
            alpha_h: self.alpha_hris_bs,
            alpha_g: self.alpha_user_hris,
            lambda0: self.reference_gain,
            d0: self.reference_distance_m,
        }
    }

    pub fn draw(&self, users: usize, seed: u64) -> Geometry {
        let mut g = scenario_geometry(users, self.user_radius_m, self.user_center_m, seed);
        g.hris_position = self.hris_position_m;
        g
    }
}

impl ScenarioConfig {
    pub fn tau(&self) -> usize {
        self.subframes * self.slots_per_subframe
    }

    pub fn topology(&self) -> ConnectionTopology {
        self.topology.topology(self.elements, self.rf_chains)
    }

    /// Resolve path losses. With a geometry, `position_seed` selects the
    /// user drop.
    pub fn system(&self, position_seed: u64) -> Result<SystemConfig> {
        let (beta, gammas) = match (&self.channel, &self.geometry) {
            (Some(fixed), None) => {
                let gammas = match fixed.gammas.len() {
                    1 => vec![fixed.gammas[0]; self.users],
                    n if n == self.users => fixed.gammas.clone(),
                    n => return bad(format!("{n} user path losses for {} users", self.users)),
                };
                (fixed.beta, gammas)
            }
            (None, Some(geo)) => {
                let geometry = geo.draw(self.users, position_seed);
                geometry.path_losses(&geo.model())?
            }
            _ => return bad("exactly one of [scenario.channel] and [scenario.geometry] is required"),
        };
        let config = SystemConfig {
            m: self.bs_antennas,
            n: self.elements,
            n_r: self.rf_chains,
            k: self.users,
            b: self.subframes,
            t: self.slots_per_subframe,
            gamma_db: self.gamma_db,
            beta,
            gammas,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn redraws_positions(&self) -> bool {
        self.geometry.as_ref().is_some_and(|g| g.redraw_positions)
    }

    pub fn validate(&self) -> Result<()> {
        self.system(0).map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRuleConfig {
    Fixed,
    BarzilaiBorwein,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OptimizerConfig {
    pub eta: f64,
    pub lambda: Option<f64>,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub window: usize,
    pub backtracking: bool,
    pub step_rule: StepRuleConfig,
    pub box_scaling: bool,
    pub normalize: bool,
    pub w_h: f64,
    pub w_g: f64,
    /// Random starts per optimized baseline; the best final loss wins.
    pub restarts: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        let s = OptimizerSettings::default();
        OptimizerConfig {
            eta: s.eta,
            lambda: s.lambda,
            max_iter: s.max_iter,
            rel_tol: s.rel_tol,
            window: s.window,
            backtracking: s.backtracking,
            step_rule: StepRuleConfig::BarzilaiBorwein,
            box_scaling: s.box_scaling,
            normalize: s.normalize,
            w_h: 1.0,
            w_g: 1.0,
            restarts: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn settings(&self) -> OptimizerSettings {
        OptimizerSettings {
            eta: self.eta,
            lambda: self.lambda,
            max_iter: self.max_iter,
            rel_tol: self.rel_tol,
            window: self.window,
            backtracking: self.backtracking,
            step_rule: match self.step_rule {
                StepRuleConfig::Fixed => StepRule::Fixed,
                StepRuleConfig::BarzilaiBorwein => StepRule::BarzilaiBorwein,
            },
            box_scaling: self.box_scaling,
            normalize: self.normalize,
            ..OptimizerSettings::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    Snr,
    Pilot,
    Rfchain,
}

impl CurveKind {
    pub fn label(self) -> &'static str {
        match self {
            CurveKind::Snr => "gamma_db",
            CurveKind::Pilot => "tau",
            CurveKind::Rfchain => "rf_chains",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub rho_grid: Vec<f64>,
    pub snr_grid_db: Vec<f64>,
    /// Total pilot lengths `tau`; `B = tau / T`.
    pub pilot_grid: Vec<usize>,
    pub rfchain_grid: Vec<usize>,
    pub curves: Vec<CurveKind>,
    pub baselines: Vec<Baseline>,
    pub convergence_inits: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            rho_grid: (1..10).map(|i| i as f64 / 10.0).collect(),
            snr_grid_db: vec![0.0, 10.0, 20.0, 30.0],
            pilot_grid: Vec::new(),
            rfchain_grid: Vec::new(),
            curves: vec![CurveKind::Snr, CurveKind::Pilot, CurveKind::Rfchain],
            baselines: vec![Baseline::Optimized, Baseline::RandomParams, Baseline::PartialConnection],
            convergence_inits: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ValidateConfig {
    /// Allowed `|empirical / analytic - 1|` for `G`.
    pub g_tolerance: f64,
    /// Empirical `H` error must exceed `(1 - slack)` times the bound.
    pub h_bound_slack: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        ValidateConfig { g_tolerance: 0.03, h_bound_slack: 0.03 }
    }
}

fn sorted<T: PartialOrd>(xs: &[T]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        self.scenario.validate()?;
        let s = &self.sweeps;
        if !sorted(&s.rho_grid) || s.rho_grid.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
            return bad("rho_grid must be sorted, without repeats, inside (0, 1)");
        }
        if !sorted(&s.snr_grid_db) || !sorted(&s.pilot_grid) || !sorted(&s.rfchain_grid) {
            return bad("grids must be sorted without repeats");
        }
        let t = self.scenario.slots_per_subframe;
        if let Some(tau) = s.pilot_grid.iter().find(|&&tau| tau == 0 || tau % t != 0) {
            return bad(format!("pilot length {tau} is not a positive multiple of T = {t}"));
        }
        if let Some(n_r) = s.rfchain_grid.iter().find(|&&r| r == 0 || r > self.scenario.elements) {
            return bad(format!("rf chain count {n_r} outside 1..=N"));
        }
        if s.baselines.is_empty() {
            return bad("at least one baseline is required");
        }
        if self.optimizer.restarts == 0 {
            return bad("optimizer.restarts must be at least 1");
        }
        self.optimizer.settings().validate()?;
        Ok(())
    }

    /// Seed for a named purpose, derived from the experiment seed.
    pub fn derived_seed(&self, purpose: u64) -> u64 {
        rng::derive(self.seed, purpose)
    }
}
