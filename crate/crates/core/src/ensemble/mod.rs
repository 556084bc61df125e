//! Ensemble construction (Bagging, Simple, Arcing, Ada-Boosting) and
//! prediction combiners.

mod build;
mod combine;
mod prob;

pub use build::{build, build_ada, build_arcing, build_bagging, build_simple, build_simple_seeded, Method};
pub use combine::{combine_scores, Combiner, Ensemble};
pub use prob::{
    ada_update, arcing_probabilities, AdaUpdateResult, MissCountVector, ProbabilityVector, PERFECT_VOTE_WEIGHT,
    SUM_TOLERANCE, WEAK_VOTE_WEIGHT, ZERO_ERROR,
};
