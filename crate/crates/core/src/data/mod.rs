//! Tabular data: schemas, loading, network encoding, fold plans, resampling,
//! noise injection and the synthetic one-sided-noise generator.

mod dataset;
mod encode;
mod noise;
mod sample;
mod schema;
mod synthetic;

pub use dataset::{load_dataset, Dataset, Example, FeatureValue};
pub use encode::{encode, EncodedExample, Encoder, NormalizationStats};
pub use noise::inject_noise;
pub use sample::{bootstrap_sample, make_folds, weighted_sample, weighted_sample_checked, FoldPlan, IndexSample};
pub use schema::{Feature, FeatureKind, Schema};
pub use synthetic::{flip_count, gen_one_sided_noise, Hyperplane, SyntheticProblem, FEATURES, NEGATIVE, POSITIVE, RELEVANT};

/// Cell token marking a missing value.
pub const MISSING_TOKEN: &str = "?";
