//! Ensemble statistics of the random draws.

mod common;

use hris_core::channel::sample_channels;
use hris_core::hris::{ConnectionTopology, HrisParams};
use hris_core::pilots::{generate_pilots, project_pilots, simulate_uplink};
use hris_core::rng::{complex_normal, stream, Entity};
use hris_core::{ChannelRealization, CMat, SystemConfig};

const DRAWS: usize = 100_000;

#[test]
fn tiny_variance_entry() {
    let mut rng = stream(1, Entity::ChannelH, 0);
    let v: f64 = (0..DRAWS).map(|_| complex_normal(&mut rng, 1e-6).norm_sqr()).sum::<f64>() / DRAWS as f64;
    assert!((v / 1e-6 - 1.0).abs() < 0.03, "{v}");
}

#[test]
fn channel_entries_are_circular_and_uncorrelated() {
    let config = SystemConfig { m: 1, n: 2, n_r: 1, k: 1, b: 1, t: 1, gamma_db: 0.0, beta: 2.0, gammas: vec![0.5] };
    let mut h = Vec::with_capacity(DRAWS);
    let mut g = Vec::with_capacity(DRAWS);
    for trial in 0..DRAWS as u64 {
        let ch = sample_channels(&config, trial);
        h.push((ch.h[(0, 0)], ch.h[(0, 1)]));
        g.push(ch.g[(0, 0)]);
    }
    let re = common::mean_square(h.iter().map(|p| p.0.re));
    let im = common::mean_square(h.iter().map(|p| p.0.im));
    assert!((re / 1.0 - 1.0).abs() < 0.03 && (im / 1.0 - 1.0).abs() < 0.03, "{re} {im}");
    let g_re = common::mean_square(g.iter().map(|z| z.re));
    assert!((g_re / 0.25 - 1.0).abs() < 0.03, "{g_re}");

    let cross: num_complex::Complex64 = h.iter().map(|(a, b)| a * b.conj()).sum();
    let power: f64 = h.iter().map(|(a, _)| a.norm_sqr()).sum();
    assert!(cross.norm() / power < 0.02);
    let hg: num_complex::Complex64 = h.iter().zip(&g).map(|((a, _), z)| a * z.conj()).sum();
    assert!(hg.norm() / (power * g.iter().map(|z| z.norm_sqr()).sum::<f64>()).sqrt() < 0.02);
}

fn silent_channels(config: &SystemConfig) -> ChannelRealization {
    ChannelRealization { h: CMat::zeros(config.m, config.n), g: CMat::zeros(config.n, config.k) }
}

#[test]
fn received_noise_has_unit_variance() {
    let config = SystemConfig { m: 4, n: 4, n_r: 2, k: 2, b: 5, t: 4, gamma_db: 10.0, beta: 1.0, gammas: vec![1.0; 2] };
    let params = HrisParams::constant(5, 0.5, 0.0, 0.0, 4, 2, &ConnectionTopology::FullyConnected).unwrap();
    let pilots = generate_pilots(2, 4).unwrap();
    let mut samples = Vec::new();
    for seed in 0..(DRAWS / 80 + 1) as u64 {
        let obs = simulate_uplink(&silent_channels(&config), &params, &pilots, &config, 1.0, seed).unwrap();
        samples.extend(obs.y_bs.iter().flat_map(|y| y.iter().map(|z| z.norm_sqr()).collect::<Vec<_>>()));
    }
    assert!(samples.len() >= DRAWS);
    let v = samples.iter().sum::<f64>() / samples.len() as f64;
    assert!((v - 1.0).abs() < 0.03, "{v}");
}

#[test]
fn projected_noise_variance() {
    let config = SystemConfig { m: 4, n: 4, n_r: 2, k: 2, b: 5, t: 4, gamma_db: 10.0, beta: 1.0, gammas: vec![1.0; 2] };
    let params = HrisParams::constant(5, 0.5, 0.0, 0.0, 4, 2, &ConnectionTopology::FullyConnected).unwrap();
    let pilots = generate_pilots(2, 4).unwrap();
    let (mut total, mut count) = (0.0, 0usize);
    let mut seed = 0;
    while count < DRAWS {
        let obs = simulate_uplink(&silent_channels(&config), &params, &pilots, &config, 1.0, seed).unwrap();
        let proj = project_pilots(&obs, &pilots).unwrap();
        for y in proj.ytilde_bs.iter().chain(std::iter::once(&proj.ytilde_rc)) {
            total += y.iter().map(|z| z.norm_sqr()).sum::<f64>();
            count += y.len();
        }
        seed += 1;
    }
    // per entry 1/(T Gamma); summed over the K pilot columns K/(T Gamma)
    let per_entry = total / count as f64;
    let expected = 1.0 / (config.t as f64 * config.snr());
    assert!((per_entry / expected - 1.0).abs() < 0.03, "{per_entry} vs {expected}");
}
