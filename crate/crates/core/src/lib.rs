//! Uplink multi-user MIMO channel estimation through a hybrid
//! reflecting-and-sensing reconfigurable intelligent surface (HRIS).
//!
//! The crate is organised bottom-up:
//!
//! - [`channel`]: scenario geometry, path loss and Rayleigh channel draws.
//! - [`hris`]: the surface parameterization and its reflection/reception matrices.
//! - [`pilots`]: orthogonal pilots, uplink sounding simulation and pilot projection.
//! - [`estimators`]: noise-free recovery, LMMSE estimators and closed-form MSEs.
//! - [`optimizer`]: barrier-regularized gradient descent over the surface parameters.
//! - [`trial`]: one Monte Carlo run of the sounding and both estimation stages.
//!
//! All randomness is driven by [`rng::stream`], so every draw is a pure
//! function of `(seed, entity id)`.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod estimators;
pub mod hris;
pub mod linalg;
pub mod optimizer;
pub mod pilots;
pub mod rng;
pub mod trial;

pub use channel::{ChannelRealization, Geometry, SystemConfig};
pub use error::{HrisError, Result};
pub use estimators::{EffectiveNoiseCov, GEstimate, HEstimate};
pub use hris::{ConnectionTopology, HrisParams};
pub use optimizer::{OptimizerSettings, ParamLayout, ParamVector};
pub use pilots::{PilotMatrix, SoundingObservation};

/// Dense complex matrix used throughout the crate.
pub type CMat = nalgebra::DMatrix<num_complex::Complex64>;
/// Dense real matrix.
pub type RMat = nalgebra::DMatrix<f64>;
