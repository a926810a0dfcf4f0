//! Monte Carlo checks of the closed-form MSEs and of the estimators.

mod common;

use hris_core::estimators::{analytic_mse_g, EstimationContext, MseTerms};
use hris_core::hris::HrisParams;
use hris_core::linalg::{c, hpd_inverse, identity, trace};
use hris_core::pilots::generate_pilots;
use hris_core::trial::{run_trial, run_trial_detailed};
use hris_core::SystemConfig;
use num_complex::Complex64;

const TRIALS: u64 = 20_000;

struct Averages {
    g_err: f64,
    h_err: f64,
}

fn monte_carlo(config: &SystemConfig, params: &HrisParams, trials: u64) -> Averages {
    let pilots = generate_pilots(config.k, config.t).unwrap();
    let (mut g, mut h) = (0.0, 0.0);
    for seed in 0..trials {
        let out = run_trial(config, params, &pilots, 1_000_000 + seed).unwrap();
        g += out.g_err;
        h += out.h_err;
    }
    Averages { g_err: g / trials as f64, h_err: h / trials as f64 }
}

/// `M Tr((I/beta + Sigma ∘ P^T W conj(P))^{-1})`, the bound obtained when the
/// expectation of `Ĝ [D^{-T}]_ij Ĝ^H` is taken as `w_ij Sigma`.
fn consistent_jensen_bound(terms: &MseTerms, beta: f64, m: usize) -> f64 {
    let q = terms.sigma.component_mul(&terms.cross);
    let f = identity(q.nrows()) * c(1.0 / beta) + q;
    m as f64 * trace(&hpd_inverse(&f).unwrap()).re
}

#[test]
fn g_estimator_matches_closed_form_mse() {
    let config = common::desk(3);
    let params = common::random_params(&config, 11);
    let analytic = analytic_mse_g(&params, &config.gammas, config.t, config.snr(), config.k).unwrap();
    let mc = monte_carlo(&config, &params, TRIALS);
    assert!((mc.g_err / analytic - 1.0).abs() < 0.03, "MC {} vs {analytic}", mc.g_err);
}

#[test]
fn h_error_respects_the_lower_bound() {
    let config = common::desk(3);
    let params = common::random_params(&config, 12);
    let terms = MseTerms::evaluate(&params, &EstimationContext::from_config(&config)).unwrap();
    let mc = monte_carlo(&config, &params, TRIALS);
    assert!(mc.h_err >= 0.97 * terms.eps_h, "MC {} vs eps_H {}", mc.h_err, terms.eps_h);
    let tight = consistent_jensen_bound(&terms, config.beta, config.m);
    assert!(tight >= terms.eps_h - 1e-12);
    assert!(mc.h_err >= 0.97 * tight, "MC {} vs consistent bound {tight}", mc.h_err);
}

#[test]
fn conditional_h_mse_is_calibrated() {
    // given the conveyed Ĝ the BS estimator is the exact LMMSE, so its
    // reported error matches the realized one on average
    let config = common::desk(4);
    let params = common::random_params(&config, 13);
    let pilots = generate_pilots(config.k, config.t).unwrap();
    let (mut realized, mut reported) = (0.0, 0.0);
    for seed in 0..TRIALS {
        let d = run_trial_detailed(&config, &params, &pilots, 2_000_000 + seed, false).unwrap();
        realized += d.outcome.h_err;
        reported += d.h.mse_bound;
    }
    assert!((realized / reported - 1.0).abs() < 0.03, "{realized} vs {reported}");
}

#[test]
fn estimation_error_is_orthogonal_to_the_estimate() {
    let config = common::desk(3);
    let params = common::random_params(&config, 14);
    let pilots = generate_pilots(config.k, config.t).unwrap();
    let mut cross = Complex64::new(0.0, 0.0);
    let (mut err_pow, mut est_pow) = (0.0, 0.0);
    let mut g_cross = Complex64::new(0.0, 0.0);
    let (mut g_err_pow, mut g_est_pow) = (0.0, 0.0);
    for seed in 0..10_000 {
        let d = run_trial_detailed(&config, &params, &pilots, 3_000_000 + seed, false).unwrap();
        let err = &d.channels.h - &d.h.h_hat;
        cross += err.iter().zip(d.h.h_hat.iter()).map(|(e, h)| e * h.conj()).sum::<Complex64>();
        err_pow += err.norm_squared();
        est_pow += d.h.h_hat.norm_squared();
        let g_err = &d.channels.g - &d.g.g_hat;
        g_cross += g_err.iter().zip(d.g.g_hat.iter()).map(|(e, g)| e * g.conj()).sum::<Complex64>();
        g_err_pow += g_err.norm_squared();
        g_est_pow += d.g.g_hat.norm_squared();
    }
    let r = cross.norm() / (err_pow * est_pow).sqrt();
    assert!(r < 0.02, "H: {r}");
    let r = g_cross.norm() / (g_err_pow * g_est_pow).sqrt();
    assert!(r < 0.02, "G: {r}");
}

#[test]
fn no_sensing_leaves_the_prior() {
    let config = common::desk(4);
    let mut params = common::random_params(&config, 15);
    params.rho.fill(1.0 - 1e-6);
    let mc = monte_carlo(&config, &params, 5_000);
    let prior = config.n as f64 * config.gamma_sum();
    assert!((mc.g_err / prior - 1.0).abs() < 0.03);
}
