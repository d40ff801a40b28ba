//! Weighted generalized ψ-estimators as points of sign change.
//!
//! The crate locates the point where `t ↦ Σ λᵢ ψ(xᵢ, t)` changes sign from
//! positive to negative, without assuming continuity, and builds the
//! monotone representation of a ψ-function: a positive weight `p` such that
//! every `t ↦ p(t) ψ(z, t)` is decreasing, and the convexified loss
//! `ρ*(z, t) = −∫_{ϑ₁(z)}^t p ψ(z, ·)` that shares its unique minimizer with
//! the original objective.
//!
//! All numerics are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix the scalar to `f64`.
//!
//! ```
//! use psi_core::{estimate, NormalVariance, SolveOptions, WeightedSample};
//!
//! let model = NormalVariance::new(2.0, 1.0).unwrap();
//! let sample = WeightedSample::uniform(vec![1.0, 3.0]).unwrap();
//! let r = estimate(&model, &sample, &SolveOptions::default()).unwrap();
//! assert!((r.theta - 1.0).abs() < 1e-9);
//! ```

// `!(a > b)` is used on purpose so that NaN falls on the failing side.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
mod error;
mod grid;
mod interval;
pub mod minimize;
mod model;
pub mod models;
pub mod quadrature;
pub mod representation;
mod sample;
mod scalar;
pub mod solve;

pub use error::{Error, Result, Side};
pub use grid::Grid;
pub use interval::ParamInterval;
pub use minimize::{argmin_objective, MinimizeOptions};
pub use model::{d2psi_or_fd, FnModel, PsiModel};
pub use quadrature::QuadratureOptions;
pub use sample::WeightedSample;
pub use scalar::{pairwise_sum, pairwise_sum_slice, Scalar};
pub use solve::{
    comparison_function, estimate, locate_sign_change, theta1, weighted_psi_sum, ComparisonFunction, Crossing,
    Refinement, SignChangeResult, SolveOptions,
};

pub type Interval = ParamInterval<f64>;
pub type Sample = WeightedSample<f64, f64>;
pub type SignChange = SignChangeResult<f64>;
pub type Options = SolveOptions<f64>;
pub type NormalVariance = models::NormalVarianceModel<f64>;
pub type Location = models::LocationModel<f64>;
pub type Builtin = models::BuiltinModel<f64>;
pub type Weight = representation::MonotoneWeight<f64>;
pub type Envelope = representation::EnvelopeTable<f64>;
pub type NormalVarianceF32 = models::NormalVarianceModel<f32>;
pub type SampleF32 = WeightedSample<f32, f32>;
