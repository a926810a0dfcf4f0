//! First-order descent `x <- x - eta ∇L` with an interior-preserving
//! backtracking safeguard.

use super::objective::{barrier, barrier_gradient, SmoothObjective};
use crate::error::{HrisError, Result};

/// Tuning knobs of [`optimize`].
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerSettings {
    /// Initial step size.
    pub eta: f64,
    /// Barrier weight; `None` picks `1e-6 f(x0) / B_C(x0)`.
    pub lambda: Option<f64>,
    pub max_iter: usize,
    /// Stop once `|L_{t-w} - L_t| <= rel_tol |L_t|` with `w = window`.
    pub rel_tol: f64,
    pub window: usize,
    /// Shrink rejected steps instead of failing.
    pub backtracking: bool,
    /// Factor applied to a rejected step.
    pub shrink: f64,
    /// Factor applied to the step after an accepted one.
    pub growth: f64,
    /// How the trial step of each iteration is chosen.
    pub step_rule: StepRule,
    /// Scale each gradient entry by the squared relative distance of its
    /// coordinate to the nearest bound, so coordinates heading for a bound
    /// approach it geometrically instead of stalling behind the barrier.
    pub box_scaling: bool,
    pub max_backtracks: usize,
    /// Descend on `L / L(x0)` so `eta` does not depend on the MSE scale.
    pub normalize: bool,
    /// Coordinates held at their initial value.
    pub frozen: Vec<usize>,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            eta: 1e-2,
            lambda: None,
            max_iter: 100,
            rel_tol: 1e-6,
            window: 10,
            backtracking: true,
            shrink: 0.5,
            growth: 1.0,
            step_rule: StepRule::BarzilaiBorwein,
            box_scaling: true,
            max_backtracks: 60,
            normalize: true,
            frozen: Vec::new(),
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(HrisError::InvalidConfig(what.to_string()));
        if !(self.eta > 0.0) {
            return bad("eta must be positive");
        }
        if matches!(self.lambda, Some(l) if !(l >= 0.0)) {
            return bad("lambda must be non-negative");
        }
        if !(self.shrink > 0.0 && self.shrink < 1.0) {
            return bad("shrink factor must lie in (0, 1)");
        }
        if !(self.growth >= 1.0) {
            return bad("growth factor must be >= 1");
        }
        if !(self.rel_tol >= 0.0) {
            return bad("rel_tol must be non-negative");
        }
        if self.window == 0 {
            return bad("convergence window must be at least 1");
        }
        Ok(())
    }
}

/// Trial step of every iteration, before backtracking.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepRule {
    /// `eta` on the first iteration, then the last accepted step times `growth`.
    Fixed,
    /// `|s|^2 / <s, y>` from the last displacement `s` and gradient change
    /// `y`; falls back to [`StepRule::Fixed`] when the curvature is not positive.
    BarzilaiBorwein,
}

/// One row of the optimization trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    pub iteration: usize,
    pub loss: f64,
    pub objective: f64,
    pub barrier: f64,
    /// Step size that produced this iterate (0 for the start point).
    pub step: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StopReason {
    Converged,
    MaxIterations,
    /// The (free part of the) gradient vanished.
    Stationary,
    /// Backtracking exhausted without an acceptable step.
    NoProgress,
    /// An evaluation failed; the trace ends at the last good iterate.
    Aborted(HrisError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOutcome {
    pub x: Vec<f64>,
    pub trace: Vec<IterationRecord>,
    pub stop: StopReason,
    /// Barrier weight actually used.
    pub lambda: f64,
}

impl OptimizeOutcome {
    pub fn final_loss(&self) -> f64 {
        self.trace.last().map(|r| r.loss).unwrap_or(f64::NAN)
    }

    pub fn iterations(&self) -> usize {
        self.trace.len() - 1
    }
}

fn evaluate<O: SmoothObjective + ?Sized>(obj: &O, x: &[f64], lambda: f64) -> Result<(f64, f64, f64)> {
    let b = barrier(obj.layout(), x)?;
    let f = obj.value(x)?;
    Ok((f + lambda * b, f, b))
}

/// Run the descent from `x0`. Errors only if `x0` itself is unusable;
/// failures later on end the run with [`StopReason::Aborted`].
pub fn optimize<O: SmoothObjective + ?Sized>(obj: &O, x0: &[f64], settings: &OptimizerSettings) -> Result<OptimizeOutcome> {
    settings.validate()?;
    let layout = obj.layout();
    if x0.len() != layout.len() {
        return Err(HrisError::dims("x0", (layout.len(), 1), (x0.len(), 1)));
    }
    if !layout.is_interior(x0) {
        return Err(HrisError::Boundary("x0 is not strictly interior".into()));
    }
    if let Some(&i) = settings.frozen.iter().find(|&&i| i >= x0.len()) {
        return Err(HrisError::IndexOutOfRange { index: i, count: x0.len() });
    }
    let f0 = obj.value(x0)?;
    let b0 = barrier(layout, x0)?;
    let lambda = settings.lambda.unwrap_or(1e-6 * f0 / b0);
    let mut loss = f0 + lambda * b0;
    let scale = if settings.normalize && loss > 0.0 { 1.0 / loss } else { 1.0 };

    let mut x = x0.to_vec();
    let mut trace = vec![IterationRecord { iteration: 0, loss, objective: f0, barrier: b0, step: 0.0 }];
    let mut step = settings.eta;
    let mut previous: Option<(Vec<f64>, Vec<f64>)> = None;
    let upper = layout.upper_bounds();
    let finish = |x, trace, stop| Ok(OptimizeOutcome { x, trace, stop, lambda });

    for iteration in 1..=settings.max_iter {
        let grad = match obj.value_and_gradient(&x).and_then(|(_, g)| Ok((g, barrier_gradient(layout, &x)?))) {
            Ok((g, bg)) => {
                let mut g: Vec<f64> = g.iter().zip(&bg).map(|(gf, gb)| scale * (gf + lambda * gb)).collect();
                for &i in &settings.frozen {
                    g[i] = 0.0;
                }
                g
            }
            Err(e) => return finish(x, trace, StopReason::Aborted(e)),
        };
        if grad.iter().all(|g| *g == 0.0) {
            return finish(x, trace, StopReason::Stationary);
        }
        let weights: Vec<f64> = if settings.box_scaling {
            x.iter().zip(&upper).map(|(&v, &hi)| (v.min(hi - v) / (0.5 * hi)).powi(2)).collect()
        } else {
            vec![1.0; x.len()]
        };
        let dir: Vec<f64> = grad.iter().zip(&weights).map(|(g, w)| g * w).collect();
        if let (StepRule::BarzilaiBorwein, Some((px, pg))) = (settings.step_rule, &previous) {
            // BB step in the metric induced by the weights
            let (mut ss, mut sy) = (0.0, 0.0);
            for i in 0..x.len() {
                let (si, yi) = (x[i] - px[i], grad[i] - pg[i]);
                ss += si * si / weights[i];
                sy += si * yi;
            }
            if sy > 0.0 && ss > 0.0 {
                step = ss / sy;
            }
        }

        let mut trial = step;
        let mut backtracks = 0;
        let accepted = loop {
            let cand: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi - trial * di).collect();
            let eval = if layout.is_interior(&cand) {
                evaluate(obj, &cand, lambda)
            } else {
                Err(HrisError::Domain(format!("step {trial} leaves the feasible box")))
            };
            match eval {
                Ok(v) if !settings.backtracking || v.0 <= loss => break Some((cand, v)),
                Err(e) if !settings.backtracking => return finish(x, trace, StopReason::Aborted(e)),
                _ => {}
            }
            backtracks += 1;
            if backtracks > settings.max_backtracks {
                break None;
            }
            trial *= settings.shrink;
        };
        let Some((cand, (new_loss, f, b))) = accepted else {
            return finish(x, trace, StopReason::NoProgress);
        };
        previous = Some((std::mem::replace(&mut x, cand), grad));
        trace.push(IterationRecord { iteration, loss: new_loss, objective: f, barrier: b, step: trial });
        loss = new_loss;
        step = trial * settings.growth;
        if trace.len() > settings.window {
            let reference = trace[trace.len() - 1 - settings.window].loss;
            if (reference - loss).abs() <= settings.rel_tol * loss.abs() {
                return finish(x, trace, StopReason::Converged);
            }
        }
    }
    finish(x, trace, StopReason::MaxIterations)
}
