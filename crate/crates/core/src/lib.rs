//! Ensemble learning benchmark.
//!
//! Builds Bagging, Arcing (Arc-x4), Ada-Boosting (resampling with restarts)
//! and Simple random-restart ensembles over two base learners, a C4.5-style
//! decision tree and a single-hidden-layer backpropagation network, and runs
//! them through repeated k-fold cross-validation, ensemble-size sweeps,
//! label-noise studies and a synthetic one-sided-noise experiment.
//!
//! Every random choice flows from an explicit seed (see [`seed`]), so results
//! are bit-for-bit identical whether the `parallel` feature is enabled or not.

pub mod config;
pub mod data;
pub mod emit;
pub mod ensemble;
mod error;
pub mod harness;
pub mod learners;
pub mod par;
pub mod seed;

pub use error::{Error, Result};
