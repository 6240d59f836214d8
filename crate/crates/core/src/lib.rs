//! Simulation and exact Bayesian analysis of single-particle tracks.
//!
//! The crate generates scaled Brownian motion (SBM), fractional Brownian
//! motion (FBM), and continuous-time random walk (CTRW) trajectories with
//! measurement noise, evaluates exact likelihoods for the two Gaussian
//! models, and selects between them through nested-sampling evidences.
//!
//! The numerical kernels ([`model`], [`simulate`]) are generic over the
//! scalar type through [`num::Real`]; the statistical pipeline runs in
//! `f64`, and the crate root re-exports `f64` aliases of the generic types
//! for it.

pub mod error;
pub mod inference;
pub mod model;
pub mod nested;
pub mod num;
pub mod priors;
pub mod seeds;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};

/// `f64` aliases used by the inference pipeline.
pub type SbmParams = model::SbmParams<f64>;
pub type FbmParams = model::FbmParams<f64>;
pub type ModelParams = model::ModelParams<f64>;
pub type IncrementSeries = model::IncrementSeries<f64>;
pub type CovarianceMatrix = model::CovarianceMatrix<f64>;
pub type TrajectoryRecord = simulate::TrajectoryRecord<f64>;
pub type GroundTruth = simulate::GroundTruth<f64>;
pub type MsdCurve = simulate::MsdCurve<f64>;
