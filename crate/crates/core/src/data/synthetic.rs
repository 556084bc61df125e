use std::sync::Arc;

use rand::seq::index;
use rand::Rng as _;

use super::dataset::{Dataset, Example, FeatureValue};
use super::schema::{Feature, Schema};
use crate::seed::SeedPath;
use crate::{Error, Result};

/// Number of generated features; the first [`RELEVANT`] define the concept.
pub const FEATURES: usize = 6;
pub const RELEVANT: usize = 2;

/// Label of points with a non-negative projection on the normal.
pub const POSITIVE: usize = 1;
pub const NEGATIVE: usize = 0;

/// A unit-norm hyperplane through the origin over the relevant features.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperplane {
    pub normal: [f64; RELEVANT],
}

impl Hyperplane {
    pub fn side(&self, x: &[f64]) -> usize {
        let dot: f64 = self.normal.iter().zip(x).map(|(w, v)| w * v).sum();
        if dot >= 0.0 {
            POSITIVE
        } else {
            NEGATIVE
        }
    }
}

#[derive(Debug, Clone)]
pub struct SyntheticProblem {
    pub train: Dataset,
    pub test: Dataset,
    pub concept: Hyperplane,
    /// Train indices whose labels were flipped, ascending.
    pub flipped: Vec<usize>,
}

fn schema() -> Schema {
    let features = (1..=FEATURES).map(|i| Feature::continuous(format!("x{i}"))).collect();
    Schema::new(features, vec!["neg".into(), "pos".into()]).expect("static schema is valid")
}

/// Generates a linearly separable problem with one-sided label noise.
///
/// Points are uniform on [-1,1]^6 and labelled by a random hyperplane through
/// the origin over features 1 and 2. Then exactly
/// `round(noise * positive_train)` positive-side training points, chosen
/// uniformly, are relabelled negative. The test set stays clean.
pub fn gen_one_sided_noise(n_train: usize, n_test: usize, noise: f64, seed: u64) -> Result<SyntheticProblem> {
    if !(0.0..1.0).contains(&noise) {
        return Err(Error::InvalidArgument(format!("noise {noise} outside [0,1)")));
    }
    if n_train == 0 || n_test == 0 {
        return Err(Error::InvalidArgument("synthetic sets need at least one point".into()));
    }
    let path = SeedPath::new(seed);
    let theta = path.with("concept").rng().random_range(0.0..std::f64::consts::TAU);
    let concept = Hyperplane {
        normal: [theta.cos(), theta.sin()],
    };
    let schema = Arc::new(schema());
    let draw = |n: usize, label: &str| -> Vec<(Vec<f64>, usize)> {
        let mut rng = path.with(label).rng();
        (0..n)
            .map(|_| {
                let x: Vec<f64> = (0..FEATURES).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let y = concept.side(&x);
                (x, y)
            })
            .collect()
    };
    let mut train = draw(n_train, "train");
    let test = draw(n_test, "test");

    let positive: Vec<usize> = (0..n_train).filter(|&i| train[i].1 == POSITIVE).collect();
    let n_flip = flip_count(noise, positive.len());
    let mut flipped: Vec<usize> = index::sample(&mut path.with("flip").rng(), positive.len(), n_flip)
        .into_iter()
        .map(|k| positive[k])
        .collect();
    flipped.sort_unstable();
    for &i in &flipped {
        train[i].1 = NEGATIVE;
    }

    let to_dataset = |rows: Vec<(Vec<f64>, usize)>, name: &str| {
        let examples = rows
            .into_iter()
            .map(|(x, y)| Example::new(x.into_iter().map(FeatureValue::Real).collect(), y))
            .collect();
        Dataset::new(name, Arc::clone(&schema), examples)
    };
    Ok(SyntheticProblem {
        train: to_dataset(train, "synthetic-train")?,
        test: to_dataset(test, "synthetic-test")?,
        concept,
        flipped,
    })
}

/// `round(noise * positives)`, halves rounding up.
pub fn flip_count(noise: f64, positives: usize) -> usize {
    (noise * positives as f64).round() as usize
}
