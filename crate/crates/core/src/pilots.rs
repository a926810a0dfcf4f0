//! Orthogonal pilots, uplink sounding simulation and pilot projection.
//!
//! Each user transmits its unit-modulus pilot row scaled by the amplitude
//! `a = sqrt(Gamma * sigma^2)`, so `Gamma` is the per-user transmit SNR.
//! After projection on `S^H / (T a)` the noise is `CN(0, 1/(T Gamma))` per
//! entry, i.e. `K (T Gamma)^{-1} I` once summed over the `K` columns, which
//! is the noise level the closed-form MSEs are written for.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::channel::{ChannelRealization, SystemConfig};
use crate::error::{HrisError, Result};
use crate::hris::{reception_matrix, reflection_matrix, HrisParams};
use crate::linalg::vstack;
use crate::rng::{self, Entity};
use crate::CMat;

/// `K x T` pilot block with `S S^H = T I_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotMatrix {
    s: CMat,
}

impl PilotMatrix {
    pub fn users(&self) -> usize {
        self.s.nrows()
    }

    pub fn slots(&self) -> usize {
        self.s.ncols()
    }

    pub fn matrix(&self) -> &CMat {
        &self.s
    }

    /// `max |S S^H - T I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let gram = &self.s * self.s.adjoint();
        let t = self.slots() as f64;
        let mut worst: f64 = 0.0;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let target = if i == j { t } else { 0.0 };
                worst = worst.max((gram[(i, j)] - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }
}

/// First `k` rows of the `t`-point DFT basis, `S[k, t] = e^{-2 pi i k t / T}`.
pub fn generate_pilots(k: usize, t: usize) -> Result<PilotMatrix> {
    if k > t || k == 0 {
        return Err(HrisError::InfeasiblePilots { users: k, slots: t });
    }
    let s = CMat::from_fn(k, t, |row, col| {
        // reduce the exponent mod T before scaling to keep the phase exact
        let e = (row * col) % t;
        let angle = -TAU * e as f64 / t as f64;
        let z = Complex64::from_polar(1.0, angle);
        // snap the quarter-turn points so small bases are exact
        match (4 * e) % t {
            0 => Complex64::new(z.re.round(), z.im.round()),
            _ => z,
        }
    });
    Ok(PilotMatrix { s })
}

/// Received signals over one sounding frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SoundingObservation {
    /// `(N_r B) x T` HRIS receive-chain outputs, sub-frame blocks stacked.
    pub y_rc: CMat,
    /// `B` matrices of size `M x T` observed at the BS.
    pub y_bs: Vec<CMat>,
    /// Thermal noise variance per entry at both receivers.
    pub noise_variance: f64,
    /// Per-symbol transmit amplitude.
    pub tx_amplitude: f64,
}

/// Per-symbol amplitude for transmit SNR `gamma` (linear).
pub fn tx_amplitude(gamma: f64, noise_variance: f64) -> f64 {
    (gamma * noise_variance).sqrt()
}

/// Simulate the `B x T` sounding frame. HRIS and BS noise are drawn from
/// independent streams for every sub-frame.
pub fn simulate_uplink(
    channels: &ChannelRealization,
    params: &HrisParams,
    pilots: &PilotMatrix,
    config: &SystemConfig,
    noise_variance: f64,
    seed: u64,
) -> Result<SoundingObservation> {
    check_dims(channels, params, pilots, config)?;
    if !(noise_variance >= 0.0) {
        return Err(HrisError::Domain(format!("noise variance {noise_variance} < 0")));
    }
    let amplitude = tx_amplitude(config.snr(), noise_variance);
    // with sigma^2 = 0 keep the SNR-implied amplitude finite and nonzero
    let amplitude = if noise_variance == 0.0 { config.snr().sqrt() } else { amplitude };
    let tx = pilots.matrix() * Complex64::new(amplitude, 0.0);
    let g_tx = &channels.g * &tx;

    let mut rc_blocks = Vec::with_capacity(config.b);
    let mut y_bs = Vec::with_capacity(config.b);
    for b in 0..config.b {
        let phi = reception_matrix(params, b)?;
        let psi = reflection_matrix(params, b)?;
        let mut rng_rc = rng::stream(seed, Entity::NoiseHris, b as u64);
        let mut rng_bs = rng::stream(seed, Entity::NoiseBs, b as u64);
        let z_rc = rng::complex_normal_matrix(&mut rng_rc, config.n_r, config.t, noise_variance);
        let z_bs = rng::complex_normal_matrix(&mut rng_bs, config.m, config.t, noise_variance);
        rc_blocks.push(&phi * &g_tx + z_rc);
        y_bs.push(&channels.h * (&psi * &g_tx) + z_bs);
    }
    Ok(SoundingObservation { y_rc: vstack(&rc_blocks), y_bs, noise_variance, tx_amplitude: amplitude })
}

fn check_dims(channels: &ChannelRealization, params: &HrisParams, pilots: &PilotMatrix, config: &SystemConfig) -> Result<()> {
    if channels.h.shape() != (config.m, config.n) {
        return Err(HrisError::dims("H", (config.m, config.n), channels.h.shape()));
    }
    if channels.g.shape() != (config.n, config.k) {
        return Err(HrisError::dims("G", (config.n, config.k), channels.g.shape()));
    }
    if (params.subframes(), params.elements()) != (config.b, config.n) {
        return Err(HrisError::dims("HRIS parameters (B x N)", (config.b, config.n), (params.subframes(), params.elements())));
    }
    if params.rf_chains() != config.n_r {
        return Err(HrisError::dims("HRIS mask (N_r x N)", (config.n_r, config.n), params.mask.shape()));
    }
    if (pilots.users(), pilots.slots()) != (config.k, config.t) {
        return Err(HrisError::dims("pilots", (config.k, config.t), (pilots.users(), pilots.slots())));
    }
    Ok(())
}

/// Pilot-matched observations `Y S^H / (T a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectedObservation {
    /// `(N_r B) x K`, equal to `A_RC G` plus noise.
    pub ytilde_rc: CMat,
    /// `B` matrices `M x K`, each `H Psi(b) G` plus noise.
    pub ytilde_bs: Vec<CMat>,
}

impl ProjectedObservation {
    /// Stack `vec(ytilde_bs(1)), ..., vec(ytilde_bs(B))` into one `M K B` vector.
    pub fn stacked_bs(&self) -> nalgebra::DVector<Complex64> {
        let parts: Vec<Complex64> = self.ytilde_bs.iter().flat_map(|y| y.as_slice().iter().copied()).collect();
        nalgebra::DVector::from_vec(parts)
    }
}

pub fn project_pilots(obs: &SoundingObservation, pilots: &PilotMatrix) -> Result<ProjectedObservation> {
    let t = pilots.slots();
    if obs.y_rc.ncols() != t || obs.y_bs.iter().any(|y| y.ncols() != t) {
        return Err(HrisError::DimensionMismatch {
            context: "pilot projection",
            expected: format!("{t} slots"),
            actual: format!("{} slots", obs.y_rc.ncols()),
        });
    }
    if !(obs.tx_amplitude > 0.0) {
        return Err(HrisError::Domain("transmit amplitude must be positive".into()));
    }
    let proj = pilots.matrix().adjoint() * Complex64::new(1.0 / (t as f64 * obs.tx_amplitude), 0.0);
    Ok(ProjectedObservation {
        ytilde_rc: &obs.y_rc * &proj,
        ytilde_bs: obs.y_bs.iter().map(|y| y * &proj).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::sample_channels;
    use crate::hris::{stack_reception, ConnectionTopology};
    use crate::linalg::max_abs_diff;

    fn config() -> SystemConfig {
        SystemConfig { m: 2, n: 4, n_r: 2, k: 2, b: 3, t: 2, gamma_db: 20.0, beta: 1.0, gammas: vec![1.0, 1.0] }
    }

    #[test]
    fn tiny_pilot_bases() {
        let s = generate_pilots(1, 2).unwrap();
        assert_eq!(s.matrix().as_slice(), &[Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert_eq!((s.matrix() * s.matrix().adjoint())[(0, 0)], Complex64::new(2.0, 0.0));

        let s = generate_pilots(2, 2).unwrap();
        let m = s.matrix();
        assert_eq!(m[(1, 0)], Complex64::new(1.0, 0.0));
        assert_eq!(m[(1, 1)], Complex64::new(-1.0, 0.0));
        assert_eq!(s.orthogonality_defect(), 0.0);
    }

    #[test]
    fn pilots_orthogonal_and_unit_modulus() {
        for (k, t) in [(8, 13), (3, 3), (5, 8), (16, 17)] {
            let s = generate_pilots(k, t).unwrap();
            assert!(s.orthogonality_defect() < 1e-10 * t as f64);
            assert!(s.matrix().iter().all(|z| (z.norm() - 1.0).abs() < 1e-14));
        }
    }

    #[test]
    fn pilots_need_enough_slots() {
        assert_eq!(generate_pilots(3, 2), Err(HrisError::InfeasiblePilots { users: 3, slots: 2 }));
    }

    #[test]
    fn noise_free_identity_reflection() {
        let mut cfg = config();
        cfg.b = 1;
        let ch = sample_channels(&cfg, 5);
        let params = HrisParams::constant(1, 1.0, 0.0, 0.0, 4, 2, &ConnectionTopology::FullyConnected).unwrap();
        let s = generate_pilots(2, 2).unwrap();
        let obs = simulate_uplink(&ch, &params, &s, &cfg, 0.0, 1).unwrap();
        let a = Complex64::new(obs.tx_amplitude, 0.0);
        let expected = &ch.h * &ch.g * s.matrix() * a;
        assert!(max_abs_diff(&obs.y_bs[0], &expected) < 1e-12);
        assert!(obs.y_rc.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn projection_removes_pilots() {
        let cfg = config();
        let ch = sample_channels(&cfg, 8);
        let mut rng = rng::stream(3, Entity::Params, 0);
        let params = HrisParams::random(&mut rng, cfg.b, cfg.n, cfg.n_r, &ConnectionTopology::FullyConnected).unwrap();
        let s = generate_pilots(cfg.k, cfg.t).unwrap();
        let obs = simulate_uplink(&ch, &params, &s, &cfg, 0.0, 2).unwrap();
        let proj = project_pilots(&obs, &s).unwrap();
        let expected = stack_reception(&params) * &ch.g;
        assert!(max_abs_diff(&proj.ytilde_rc, &expected) < 1e-10 * expected.norm());
        for b in 0..cfg.b {
            let psi = reflection_matrix(&params, b).unwrap();
            let e = &ch.h * psi * &ch.g;
            assert!(max_abs_diff(&proj.ytilde_bs[b], &e) < 1e-10 * e.norm());
        }
    }

    #[test]
    fn square_pilots_match_inverse() {
        // with K = T, S is invertible and Y S^H / T = Y S^{-1}
        let s = generate_pilots(3, 3).unwrap();
        let y = CMat::from_fn(2, 3, |i, j| Complex64::new(i as f64 - j as f64, 0.5 * j as f64));
        let obs = SoundingObservation { y_rc: y.clone(), y_bs: vec![], noise_variance: 1.0, tx_amplitude: 2.0 };
        let proj = project_pilots(&obs, &s).unwrap();
        let inv = s.matrix().clone().try_inverse().unwrap();
        let alt = &y * inv * Complex64::new(0.5, 0.0);
        assert!(max_abs_diff(&proj.ytilde_rc, &alt) < 1e-12);
    }

    #[test]
    fn mismatched_inputs_are_rejected() {
        let cfg = config();
        let ch = sample_channels(&cfg, 1);
        let params = HrisParams::constant(cfg.b, 0.5, 1.0, 1.0, cfg.n, cfg.n_r, &ConnectionTopology::FullyConnected).unwrap();
        let wrong = generate_pilots(2, 3).unwrap();
        assert!(matches!(simulate_uplink(&ch, &params, &wrong, &cfg, 1.0, 0), Err(HrisError::DimensionMismatch { .. })));
        let s = generate_pilots(2, 2).unwrap();
        let obs = simulate_uplink(&ch, &params, &s, &cfg, 1.0, 0).unwrap();
        assert!(project_pilots(&obs, &wrong).is_err());
    }
}
