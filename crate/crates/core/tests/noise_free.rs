//! Exact recovery from noise-free soundings, against a dense Kronecker oracle.

mod common;

use hris_core::channel::sample_channels;
use hris_core::estimators::{min_pilot_length, recover_g_noisefree, recover_h_noisefree};
use hris_core::hris::{reflection_matrices, stack_reception};
use hris_core::linalg::{hstack, kron, pinv_with_rank, unvec, vec};
use hris_core::pilots::{generate_pilots, simulate_uplink};
use hris_core::{HrisError, SystemConfig};

fn instance(n: usize, b: usize) -> SystemConfig {
    SystemConfig { m: 2, n, n_r: 2, k: 2, b, t: 2, gamma_db: 20.0, beta: 1.0, gammas: vec![1.0; 2] }
}

fn rel_err(a: &hris_core::CMat, b: &hris_core::CMat) -> f64 {
    (a - b).norm() / b.norm()
}

#[test]
fn recovery_is_exact_above_the_bound() {
    for i in 0..20u64 {
        let n = [4, 6, 8][i as usize % 3];
        let b = min_pilot_length(n, 2, 2) / 2 + (i as usize % 2);
        let config = instance(n, b);
        let params = common::random_params(&config, 100 + i);
        let pilots = generate_pilots(2, 2).unwrap();
        let ch = sample_channels(&config, 200 + i);
        let obs = simulate_uplink(&ch, &params, &pilots, &config, 0.0, i).unwrap();
        let a_rc = stack_reception(&params);

        let g = recover_g_noisefree(&obs.y_rc, obs.tx_amplitude, &pilots, &a_rc).unwrap();
        assert!(rel_err(&g, &ch.g) < 1e-8, "instance {i}: {}", rel_err(&g, &ch.g));
        // dense (S^T ⊗ A_RC)^+ oracle
        let a1 = kron(&pilots.matrix().transpose(), &a_rc);
        let (a1_pinv, rank) = pinv_with_rank(&a1).unwrap();
        assert_eq!(rank, n * 2);
        let dense = unvec(&(a1_pinv * vec(&obs.y_rc)), n, 2) / num_complex::Complex64::new(obs.tx_amplitude, 0.0);
        assert!(rel_err(&g, &dense) < 1e-9);

        let psi = reflection_matrices(&params);
        let h = recover_h_noisefree(&obs.y_bs, obs.tx_amplitude, &g, &psi, &pilots).unwrap();
        assert!(rel_err(&h, &ch.h) < 1e-8, "instance {i}: {}", rel_err(&h, &ch.h));
        let z = hstack(&psi.iter().map(|p| p * &ch.g * pilots.matrix()).collect::<Vec<_>>());
        let a2 = kron(&z.transpose(), &hris_core::linalg::identity(config.m));
        let (a2_pinv, rank) = pinv_with_rank(&a2).unwrap();
        assert_eq!(rank, config.m * n);
        let ybar = nalgebra::DVector::from_iterator(
            config.m * config.t * b,
            obs.y_bs.iter().flat_map(|y| y.iter().copied().collect::<Vec<_>>()),
        );
        let dense = unvec(&(a2_pinv * ybar), config.m, n) / num_complex::Complex64::new(obs.tx_amplitude, 0.0);
        assert!(rel_err(&h, &dense) < 1e-8);
    }
}

#[test]
fn recovery_fails_below_the_bound() {
    for i in 0..20u64 {
        let n = [4, 6, 8][i as usize % 3];
        // tau < min(N, N K / N_r) starves both stages
        let b = 1 + (i as usize % (n / 2 - 1).max(1));
        assert!(b * 2 < n);
        let config = instance(n, b);
        let params = common::random_params(&config, 300 + i);
        let pilots = generate_pilots(2, 2).unwrap();
        let ch = sample_channels(&config, 400 + i);
        let obs = simulate_uplink(&ch, &params, &pilots, &config, 0.0, i).unwrap();
        let g = recover_g_noisefree(&obs.y_rc, obs.tx_amplitude, &pilots, &stack_reception(&params));
        assert!(matches!(g, Err(HrisError::Identifiability { .. })), "instance {i}: {g:?}");
        let h = recover_h_noisefree(&obs.y_bs, obs.tx_amplitude, &ch.g, &reflection_matrices(&params), &pilots);
        assert!(matches!(h, Err(HrisError::Identifiability { .. })), "instance {i}: {h:?}");
    }
}
