//! Barrier-regularized gradient descent over the HRIS parameters.
//!
//! The parameters are flattened into a real vector `x` laid out as
//! `[rho(1..B), psi(1..B), phi(1..B)]` (see [`ParamLayout`]). The loss is
//! `L(x) = w_H eps_H + w_G eps_G + lambda B_C(x)` where `B_C` is a log-free
//! reciprocal barrier keeping every coordinate inside its open box.

mod descent;
mod fd;
mod layout;
mod objective;

pub use descent::{optimize, IterationRecord, OptimizeOutcome, OptimizerSettings, StepRule, StopReason};
pub use fd::{central_difference, directional_check, gradient_deviation};
pub use layout::{Coordinate, ParamLayout, ParamVector};
pub use objective::{barrier, barrier_gradient, Evaluation, SmoothObjective, SumMseObjective};
