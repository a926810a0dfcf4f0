//! Scenario geometry, path loss and Rayleigh channel realizations.

use rand::Rng;

use crate::error::{HrisError, Result};
use crate::rng::{self, Entity};
use crate::CMat;

/// Static dimensions and link budget of one sounding experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// BS antennas.
    pub m: usize,
    /// HRIS elements.
    pub n: usize,
    /// Receive RF chains at the HRIS.
    pub n_r: usize,
    /// Single-antenna users.
    pub k: usize,
    /// Sub-frames.
    pub b: usize,
    /// Pilot slots per sub-frame.
    pub t: usize,
    /// Transmit SNR in dB.
    pub gamma_db: f64,
    /// HRIS-BS path loss (linear).
    pub beta: f64,
    /// Per-user UT-HRIS path losses (linear).
    pub gammas: Vec<f64>,
}

impl SystemConfig {
    pub fn validate(&self) -> Result<()> {
        let dims = [("M", self.m), ("N", self.n), ("N_r", self.n_r), ("K", self.k), ("B", self.b), ("T", self.t)];
        if let Some((name, _)) = dims.iter().find(|(_, v)| *v == 0) {
            return Err(HrisError::InvalidConfig(format!("{name} must be positive")));
        }
        if self.n_r > self.n {
            return Err(HrisError::InvalidConfig(format!("N_r = {} exceeds N = {}", self.n_r, self.n)));
        }
        if self.t < self.k {
            return Err(HrisError::InfeasiblePilots { users: self.k, slots: self.t });
        }
        if self.gammas.len() != self.k {
            return Err(HrisError::InvalidConfig(format!(
                "expected {} user path losses, got {}",
                self.k,
                self.gammas.len()
            )));
        }
        if !(self.beta >= 0.0) || self.gammas.iter().any(|g| !(*g >= 0.0)) {
            return Err(HrisError::InvalidConfig("path losses must be non-negative".into()));
        }
        if !self.gamma_db.is_finite() {
            return Err(HrisError::InvalidConfig("gamma_db must be finite".into()));
        }
        Ok(())
    }

    /// Total pilot length `tau = B * T`.
    pub fn tau(&self) -> usize {
        self.b * self.t
    }

    /// Transmit SNR in linear scale.
    pub fn snr(&self) -> f64 {
        db_to_linear(self.gamma_db)
    }

    /// Trace scale of the prior covariance of `G`: `sum_k gamma_k`.
    pub fn gamma_sum(&self) -> f64 {
        self.gammas.iter().sum()
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(lin: f64) -> f64 {
    10.0 * lin.log10()
}

/// Log-distance path loss `lambda0 * (d / d0)^(-alpha)`.
pub fn pathloss(d: f64, alpha: f64, lambda0: f64, d0: f64) -> Result<f64> {
    if !(d > 0.0) || !(d0 > 0.0) || !(lambda0 > 0.0) {
        return Err(HrisError::Domain(format!(
            "path loss needs d > 0, d0 > 0, lambda0 > 0 (got d = {d}, d0 = {d0}, lambda0 = {lambda0})"
        )));
    }
    if d == d0 {
        return Ok(lambda0);
    }
    Ok(lambda0 * (d / d0).powf(-alpha))
}

pub type Point = [f64; 2];

fn distance(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Positions of the BS, the HRIS and the users, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct Geometry {
    pub bs_position: Point,
    pub hris_position: Point,
    pub user_positions: Vec<Point>,
}

/// Path-loss model parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLossModel {
    pub alpha_h: f64,
    pub alpha_g: f64,
    pub lambda0: f64,
    pub d0: f64,
}

impl Default for PathLossModel {
    fn default() -> Self {
        PathLossModel {
            alpha_h: 2.2,
            alpha_g: 2.1,
            lambda0: db_to_linear(-20.0),
            d0: 1.0,
        }
    }
}

impl Geometry {
    pub fn hris_bs_distance(&self) -> f64 {
        distance(self.hris_position, self.bs_position)
    }

    pub fn user_distances(&self) -> Vec<f64> {
        self.user_positions.iter().map(|&u| distance(u, self.hris_position)).collect()
    }

    /// `(beta, gammas)` for this layout.
    pub fn path_losses(&self, model: &PathLossModel) -> Result<(f64, Vec<f64>)> {
        let beta = pathloss(self.hris_bs_distance(), model.alpha_h, model.lambda0, model.d0)?;
        let gammas = self
            .user_distances()
            .into_iter()
            .map(|d| pathloss(d, model.alpha_g, model.lambda0, model.d0))
            .collect::<Result<Vec<_>>>()?;
        Ok((beta, gammas))
    }
}

pub const DEFAULT_BS_POSITION: Point = [0.0, 0.0];
pub const DEFAULT_HRIS_POSITION: Point = [0.0, 50.0];
pub const DEFAULT_USER_CENTER: Point = [30.0, 50.0];
pub const DEFAULT_USER_RADIUS: f64 = 10.0;

/// BS at the origin, HRIS at (0, 50 m), `k` users uniform in a disc.
pub fn scenario_geometry(k: usize, radius: f64, center: Point, seed: u64) -> Geometry {
    let mut rng = rng::stream(seed, Entity::Positions, 0);
    let user_positions = (0..k)
        .map(|_| {
            let u: f64 = rng.random();
            let v: f64 = rng.random();
            let r = radius * u.sqrt();
            let theta = 2.0 * std::f64::consts::PI * v;
            [center[0] + r * theta.cos(), center[1] + r * theta.sin()]
        })
        .collect();
    Geometry {
        bs_position: DEFAULT_BS_POSITION,
        hris_position: DEFAULT_HRIS_POSITION,
        user_positions,
    }
}

/// The individual channels of one realization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// HRIS to BS, `M x N`.
    pub h: CMat,
    /// Users to HRIS, `N x K`; column `k` is `g_k`.
    pub g: CMat,
}

/// Draw `H` with i.i.d. `CN(0, beta)` entries and column `k` of `G` with
/// i.i.d. `CN(0, gamma_k)` entries.
pub fn sample_channels(config: &SystemConfig, seed: u64) -> ChannelRealization {
    let mut rng_h = rng::stream(seed, Entity::ChannelH, 0);
    let h = rng::complex_normal_matrix(&mut rng_h, config.m, config.n, config.beta);
    let mut g = CMat::zeros(config.n, config.k);
    for (k, &gamma) in config.gammas.iter().enumerate() {
        let mut rng_g = rng::stream(seed, Entity::ChannelG, k as u64);
        for l in 0..config.n {
            g[(l, k)] = rng::complex_normal(&mut rng_g, gamma);
        }
    }
    ChannelRealization { h, g }
}
