//! The weighted sum-MSE objective, its barrier, and the exact gradient.
//!
//! Gradients of real functions of complex matrices use the convention
//! `df = Re Tr(Gᴴ dZ)`, i.e. `G = ∂f/∂Re Z + j ∂f/∂Im Z`. The reverse pass
//! below walks the forward pipeline of [`MseTerms`] backwards.

use num_complex::Complex64;

use super::layout::ParamLayout;
use crate::error::{HrisError, Result};
use crate::estimators::mse::{EstimationContext, MseTerms};
use crate::linalg::c;

/// A smooth loss over the parameter vector, without the barrier.
pub trait SmoothObjective {
    fn layout(&self) -> &ParamLayout;

    fn value(&self, x: &[f64]) -> Result<f64>;

    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)>;
}

/// `B_C(x) = sum_rho (1/x + 1/(1-x)) + sum_phase (1/x + 1/(2pi-x))`.
pub fn barrier(layout: &ParamLayout, x: &[f64]) -> Result<f64> {
    check_len(layout, x)?;
    let mut total = 0.0;
    for (i, &v) in x.iter().enumerate() {
        let hi = layout.coordinate(i).upper();
        if !(v > 0.0 && v < hi) {
            return Err(HrisError::Domain(format!("coordinate {i} = {v} outside (0, {hi})")));
        }
        total += 1.0 / v + 1.0 / (hi - v);
    }
    Ok(total)
}

pub fn barrier_gradient(layout: &ParamLayout, x: &[f64]) -> Result<Vec<f64>> {
    barrier(layout, x)?;
    Ok(x.iter()
        .enumerate()
        .map(|(i, &v)| {
            let hi = layout.coordinate(i).upper();
            -1.0 / (v * v) + 1.0 / ((hi - v) * (hi - v))
        })
        .collect())
}

fn check_len(layout: &ParamLayout, x: &[f64]) -> Result<()> {
    if x.len() == layout.len() {
        Ok(())
    } else {
        Err(HrisError::dims("parameter vector", (layout.len(), 1), (x.len(), 1)))
    }
}

/// One evaluation of the loss and its parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub loss: f64,
    pub objective: f64,
    pub barrier: f64,
    pub eps_g: f64,
    pub eps_h: f64,
}

/// `f(x) = w_H eps_H + w_G eps_G`.
#[derive(Debug, Clone)]
pub struct SumMseObjective {
    pub ctx: EstimationContext,
    layout: ParamLayout,
    pub w_h: f64,
    pub w_g: f64,
}

impl SumMseObjective {
    pub fn new(ctx: EstimationContext, layout: ParamLayout) -> Self {
        SumMseObjective { ctx, layout, w_h: 1.0, w_g: 1.0 }
    }

    pub fn with_weights(mut self, w_h: f64, w_g: f64) -> Self {
        self.w_h = w_h;
        self.w_g = w_g;
        self
    }

    pub fn terms(&self, x: &[f64]) -> Result<MseTerms> {
        check_len(&self.layout, x)?;
        if !self.layout.is_interior(x) {
            return Err(HrisError::Domain("parameter vector is not strictly interior".into()));
        }
        MseTerms::evaluate(&self.layout.unpack_unchecked(x), &self.ctx)
    }

    /// Loss `f + lambda B_C` with its parts.
    pub fn evaluate(&self, x: &[f64], lambda: f64) -> Result<Evaluation> {
        let terms = self.terms(x)?;
        let objective = self.w_h * terms.eps_h + self.w_g * terms.eps_g;
        let b = barrier(&self.layout, x)?;
        Ok(Evaluation { loss: objective + lambda * b, objective, barrier: b, eps_g: terms.eps_g, eps_h: terms.eps_h })
    }

    pub fn loss(&self, x: &[f64], lambda: f64) -> Result<f64> {
        Ok(self.evaluate(x, lambda)?.loss)
    }

    /// `∇L` with `L = f + lambda B_C`.
    pub fn gradient(&self, x: &[f64], lambda: f64) -> Result<Vec<f64>> {
        let (_, mut g) = self.value_and_gradient(x)?;
        if lambda != 0.0 {
            for (gi, bi) in g.iter_mut().zip(barrier_gradient(&self.layout, x)?) {
                *gi += lambda * bi;
            }
        }
        Ok(g)
    }

    fn backward(&self, x: &[f64], t: &MseTerms) -> Vec<f64> {
        let ctx = &self.ctx;
        let (k, n) = (ctx.k as f64, self.layout.elements());
        let k2 = c(k * k);
        let scale = c(ctx.beta / k);
        let p = &t.refl;

        // eps_H = M Re Tr(F^{-1}),  F = I/beta + Q
        let f_inv2 = &t.f_inv * &t.f_inv;
        let g_q = f_inv2.adjoint() * c(-self.w_h * ctx.m as f64);
        // Q = K^2 Sigma ∘ C
        let g_c = g_q.component_mul(&t.sigma.map(|z| z.conj())) * k2;
        let g_sigma = g_q.component_mul(&t.cross.map(|z| z.conj())) * k2;
        // C = P^T W conj(P)
        let p_conj = p.conjugate();
        let g_w = &p_conj * &g_c * p.transpose();
        let mut g_p = t.w.conjugate() * p * g_c.transpose() + t.w.transpose() * p * g_c.conjugate();
        // W = V^T, V = D_B^{-1}
        let g_v = g_w.transpose();
        let v_h = t.d_inv.adjoint();
        let g_d = -(&v_h * g_v * &v_h);
        // D_B = (beta/K) P diag(e) P^H + I/(T Gamma)
        let diag_e: Vec<f64> = t.r_err.diagonal().iter().map(|z| z.re).collect();
        let sym = &g_d + g_d.adjoint();
        let sym_p = sym * p;
        for b in 0..p.nrows() {
            for l in 0..n {
                g_p[(b, l)] += scale * sym_p[(b, l)] * diag_e[l];
            }
        }
        let ph_gdh_p = p.adjoint() * g_d.adjoint() * p;
        // G_E collects the D_B diagonal, Sigma = R_G - E and eps_G = Tr E
        let mut g_e = -g_sigma;
        for l in 0..n {
            g_e[(l, l)] += c(self.w_g) + scale * ph_gdh_p[(l, l)].re;
        }
        // E = J^{-1},  J = I/r_G + c A^H A
        let g_j = -(&t.r_err * g_e * &t.r_err);
        let g_a = &t.a_rc * (&g_j + g_j.adjoint()) * c(ctx.hris_gain());

        let layout = &self.layout;
        let n_r = layout.mask().nrows();
        let mut grad = vec![0.0; x.len()];
        for b in 0..layout.subframes() {
            for l in 0..n {
                let (rho, psi) = (x[layout.rho_index(b, l)], x[layout.psi_index(b, l)]);
                let gp = g_p[(b, l)].conj();
                grad[layout.rho_index(b, l)] += (gp * Complex64::from_polar(1.0, psi)).re;
                grad[layout.psi_index(b, l)] = (gp * Complex64::new(0.0, 1.0) * Complex64::from_polar(rho, psi)).re;
            }
            for (j, &(r, l)) in layout.links().iter().enumerate() {
                let phi = x[layout.phi_index(b, j)];
                let ga = g_a[(b * n_r + r, l)].conj();
                let unit = Complex64::from_polar(1.0, phi);
                let rho = x[layout.rho_index(b, l)];
                grad[layout.rho_index(b, l)] -= (ga * unit).re;
                grad[layout.phi_index(b, j)] = (ga * Complex64::new(0.0, 1.0 - rho) * unit).re;
            }
        }
        grad
    }
}

impl SmoothObjective for SumMseObjective {
    fn layout(&self) -> &ParamLayout {
        &self.layout
    }

    fn value(&self, x: &[f64]) -> Result<f64> {
        let t = self.terms(x)?;
        Ok(self.w_h * t.eps_h + self.w_g * t.eps_g)
    }

    fn value_and_gradient(&self, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        let t = self.terms(x)?;
        let value = self.w_h * t.eps_h + self.w_g * t.eps_g;
        Ok((value, self.backward(x, &t)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimators::{analytic_mse_g, analytic_mse_h, noise_cov_d};
    use crate::hris::{ConnectionTopology, HrisParams};
    use crate::optimizer::fd::{central_difference, directional_check, gradient_deviation};
    use crate::rng::{stream, Entity};
    use rand::Rng;
    use std::f64::consts::PI;

    fn setup(seed: u64, topo: &ConnectionTopology) -> (SumMseObjective, Vec<f64>) {
        let ctx = EstimationContext { m: 2, k: 2, t: 2, snr: 10.0, beta: 1.0, gamma_sum: 2.0 };
        let p = HrisParams::random(&mut stream(seed, Entity::Params, 0), 2, 4, 2, topo).unwrap();
        let layout = ParamLayout::of(&p);
        let x = layout.pack(&p).unwrap().x;
        (SumMseObjective::new(ctx, layout), x)
    }

    #[test]
    fn barrier_examples() {
        let layout = ParamLayout::new(1, 1, 1, &ConnectionTopology::FullyConnected).unwrap();
        let b = barrier(&layout, &[0.5, PI, PI]).unwrap();
        assert!((b - (4.0 + 4.0 / PI)).abs() < 1e-12);
        assert!(barrier(&layout, &[1e-9, PI, PI]).unwrap() > 1e9);
        assert!(matches!(barrier(&layout, &[0.0, PI, PI]), Err(HrisError::Domain(_))));
        let g = barrier_gradient(&layout, &[0.5, PI, PI]).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
    }

    #[test]
    fn objective_is_sum_of_module_mses() {
        let (obj, x) = setup(1, &ConnectionTopology::FullyConnected);
        let p = obj.layout().unpack_unchecked(&x);
        let ctx = obj.ctx;
        let eps_g = analytic_mse_g(&p, &[1.0, 1.0], ctx.t, ctx.snr, ctx.k).unwrap();
        let a = crate::hris::stack_reception(&p);
        let r_err = crate::estimators::error_covariance(&a, ctx.gamma_sum, ctx.hris_gain()).unwrap();
        let sigma = crate::linalg::identity(4) * c(ctx.gamma_sum) - &r_err;
        let d = noise_cov_d(&p, &r_err, ctx.beta, ctx.t, ctx.snr, ctx.k);
        let eps_h = analytic_mse_h(&p, &sigma, &d, ctx.beta, ctx.m, ctx.k).unwrap();
        assert!((obj.value(&x).unwrap() - eps_g - eps_h).abs() < 1e-12);
    }

    #[test]
    fn loss_is_linear_in_lambda() {
        let (obj, x) = setup(2, &ConnectionTopology::FullyConnected);
        let f = obj.loss(&x, 0.0).unwrap();
        let b = barrier(obj.layout(), &x).unwrap();
        assert_eq!(f, obj.value(&x).unwrap());
        assert!((obj.loss(&x, 1.0).unwrap() - f - b).abs() < 1e-12);
        let one = obj.loss(&x, 0.3).unwrap() - f;
        let two = obj.loss(&x, 0.6).unwrap() - f;
        assert!((two - 2.0 * one).abs() < 1e-12);
    }

    #[test]
    fn extreme_reflection_regimes() {
        let (obj, x) = setup(3, &ConnectionTopology::FullyConnected);
        let layout = obj.layout().clone();
        let with_rho = |rho: f64| {
            let mut y = x.clone();
            for (i, v) in y.iter_mut().enumerate() {
                if layout.coordinate(i).is_rho() {
                    *v = rho;
                }
            }
            obj.terms(&y).unwrap()
        };
        let all_reflect = with_rho(1.0 - 1e-6);
        assert!((all_reflect.eps_g - 8.0).abs() < 1e-3);
        let all_sense = with_rho(1e-6);
        assert!((all_sense.eps_h - 8.0).abs() < 1e-3);
    }

    fn check_fd(obj: &SumMseObjective, x: &[f64], lambda: f64) {
        let g = obj.gradient(x, lambda).unwrap();
        let fd = central_difference(|y| obj.loss(y, lambda), x, 1e-5).unwrap();
        let dev = gradient_deviation(&g, &fd);
        assert!(dev < 1e-5, "deviation {dev:e}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for seed in 0..5 {
            let (obj, x) = setup(10 + seed, &ConnectionTopology::FullyConnected);
            check_fd(&obj, &x, 0.0);
            check_fd(&obj, &x, 1e-3);
        }
        let (obj, x) = setup(20, &ConnectionTopology::round_robin(4, 2));
        check_fd(&obj, &x, 1e-3);
        let weighted = obj.clone().with_weights(0.3, 2.0);
        check_fd(&weighted, &x, 0.0);
    }

    #[test]
    fn directional_derivative() {
        let (obj, x) = setup(30, &ConnectionTopology::FullyConnected);
        let g = obj.gradient(&x, 1e-3).unwrap();
        let mut rng = stream(30, Entity::Trial, 0);
        let mut d: Vec<f64> = (0..x.len()).map(|_| rng.random_range(-1.0..1.0)).collect();
        let norm = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        d.iter_mut().for_each(|v| *v /= norm);
        let rel = directional_check(|y| obj.loss(y, 1e-3), &g, &x, &d, 1e-6).unwrap();
        assert!(rel < 1e-4, "{rel:e}");
    }
}
