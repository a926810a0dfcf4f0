#![allow(dead_code)]

use hris_core::hris::{ConnectionTopology, HrisParams};
use hris_core::rng::{stream, Entity};
use hris_core::SystemConfig;

pub fn desk(b: usize) -> SystemConfig {
    SystemConfig { m: 2, n: 4, n_r: 2, k: 2, b, t: 2, gamma_db: 20.0, beta: 1.0, gammas: vec![1.0; 2] }
}

pub fn random_params(config: &SystemConfig, seed: u64) -> HrisParams {
    let mut rng = stream(seed, Entity::Params, 0);
    HrisParams::random(&mut rng, config.b, config.n, config.n_r, &ConnectionTopology::FullyConnected).unwrap()
}

/// Sample variance about a known zero mean.
pub fn mean_square(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut count) = (0.0, 0usize);
    for x in xs {
        sum += x * x;
        count += 1;
    }
    sum / count as f64
}
