//! Parameter estimation for the two-component Gaussian mixture
//! `θ N(μ, 1) + (1 − θ) N(−μ, 1)` with known `μ` and unknown weight `θ`.
//!
//! Three M-estimators are provided: maximum likelihood, score matching
//! (Hyvärinen) and diffusion-based denoising score matching over an
//! Ornstein–Uhlenbeck path. Alongside them sit exact evaluators for the
//! Fisher divergence, the isoperimetric constant of the family, and the
//! Lipschitz/curvature constants that govern the estimators' error, plus an
//! experiment harness that writes CSV artifacts.

// `!(x > 0.0)` style guards are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod contrast;
pub mod divergence;
pub mod error;
pub mod estimator;
pub mod gaussian;
pub mod harness;
pub mod model;
pub mod quadrature;
pub mod rng;
pub mod search;
pub mod stats;

pub use error::{Error, Result};
pub use model::{evolve, sample_forward, score_diff, EvolvedParams, MixtureParams, ParamSpace};
pub use quadrature::{QuadratureMethod, QuadratureSpec};
