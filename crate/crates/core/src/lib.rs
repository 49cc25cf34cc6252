//! Rank-correlation indicators for perceptual quality assessment.
//!
//! This crate computes classic (Spearman rho, Kendall tau) and perceptually
//! weighted (PWRC) rank correlation between subjective quality scores and
//! objective metric predictions, samples SA-ST curves, integrates them into
//! confidence-aware AUC values, and runs the multi-trial split benchmark
//! protocol with push-accuracy ranking.
//!
//! The numeric core is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the dataset and harness layers are `f64`. Type aliases
//! for the common `f64` instantiations live at the crate root.
//!
//! ```
//! use pwrc::model::{rank_transform, TiePolicy};
//! use pwrc::classic::{spearman_rho, kendall_tau};
//!
//! let p = rank_transform::<f64>(&[5.0, 10.0, 20.0, 35.0, 55.0], TiePolicy::Strict).unwrap();
//! let q = rank_transform::<f64>(&[0.1, 0.2, 0.3, 0.5, 0.4], TiePolicy::Strict).unwrap();
//! assert!((spearman_rho(&p, &q).unwrap() - 0.9).abs() < 1e-12);
//! assert!((kendall_tau(&p, &q).unwrap() - 0.8).abs() < 1e-12);
//! ```

pub mod benchmark;
pub mod chart;
pub mod classic;
pub mod dataset;
pub mod error;
pub mod harness;
pub mod indicator;
pub mod model;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

/// `f64` instantiations of the generic core types.
pub type ScoreSet = model::ScoreSet<f64>;
pub type NormalizedScoreSet = model::NormalizedScoreSet<f64>;
pub type PredictionSet = model::PredictionSet<f64>;
pub type RankVector = model::RankVector<f64>;
pub type ActivationConfig = indicator::ActivationConfig<f64>;
pub type PwrcConfig = indicator::PwrcConfig<f64>;
pub type SaStCurve = indicator::SaStCurve<f64>;
pub type ImportanceWeights = indicator::ImportanceWeights<f64>;
