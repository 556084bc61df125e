//! Base learners: a C4.5-style decision tree and a backpropagation network.

mod network;
mod presets;
mod tree;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

pub use network::{sigmoid, train_from, train_network, NetworkConfig, NetworkModel};
pub use presets::{lookup_network_config, preset_names};
pub use tree::{
    gain_ratio, grow_tree, information_gain, prune, split_info, train_tree, upper_error_bound, Split, Tree,
    TreeNode, CONFIDENCE, MIN_BRANCH, MIN_SPLIT,
};

use crate::data::{Dataset, EncodedExample, Encoder, Example, IndexSample};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LearnerKind {
    Tree,
    Network,
}

impl LearnerKind {
    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Tree => "tree",
            LearnerKind::Network => "network",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tree" => Ok(LearnerKind::Tree),
            "network" => Ok(LearnerKind::Network),
            _ => Err(Error::InvalidArgument(format!("unknown learner '{s}'"))),
        }
    }
}

/// A trained tree or network.
#[derive(Debug, Clone)]
pub enum Classifier {
    Tree(Tree),
    Network { model: NetworkModel, encoder: Arc<Encoder> },
}

impl Classifier {
    pub fn kind(&self) -> LearnerKind {
        match self {
            Classifier::Tree(_) => LearnerKind::Tree,
            Classifier::Network { .. } => LearnerKind::Network,
        }
    }

    /// Per-class scores in [0,1].
    pub fn predict(&self, ex: &Example) -> Vec<f64> {
        match self {
            Classifier::Tree(t) => t.predict(ex),
            Classifier::Network { model, encoder } => model.scores(&encoder.encode_inputs(ex)),
        }
    }

    pub fn predict_class(&self, ex: &Example) -> usize {
        argmax(&self.predict(ex))
    }

    /// Line-oriented text dump.
    pub fn dump(&self) -> String {
        match self {
            Classifier::Tree(t) => t.dump(),
            Classifier::Network { model, .. } => model.dump(),
        }
    }
}

/// Index of the largest score, lowest index on ties.
pub fn argmax(scores: &[f64]) -> usize {
    let mut best = 0;
    for (k, &s) in scores.iter().enumerate() {
        if s > scores[best] {
            best = k;
        }
    }
    best
}

/// A learner bound to a fixed set of N original training examples.
///
/// Ensemble builders draw index samples over the originals, fit a model per
/// sample, and query models on the originals by index.
pub trait BaseLearner: Sync {
    type Model: Send + Sync;

    fn kind(&self) -> LearnerKind;

    /// Number of original examples.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn label(&self, i: usize) -> usize;

    fn class_count(&self) -> usize;

    fn fit(&self, sample: &IndexSample, seed: u64) -> Result<Self::Model>;

    /// Per-class scores of `model` on original example `i`.
    fn scores(&self, model: &Self::Model, i: usize) -> Vec<f64>;
}

/// Decision trees over a training set.
#[derive(Debug, Clone)]
pub struct TreeLearner {
    train: Dataset,
}

impl TreeLearner {
    pub fn new(train: Dataset) -> Self {
        TreeLearner { train }
    }

    pub fn dataset(&self) -> &Dataset {
        &self.train
    }
}

impl BaseLearner for TreeLearner {
    type Model = Classifier;

    fn kind(&self) -> LearnerKind {
        LearnerKind::Tree
    }

    fn len(&self) -> usize {
        self.train.len()
    }

    fn label(&self, i: usize) -> usize {
        self.train.examples()[i].label
    }

    fn class_count(&self) -> usize {
        self.train.schema().class_count()
    }

    fn fit(&self, sample: &IndexSample, _seed: u64) -> Result<Classifier> {
        Ok(Classifier::Tree(train_tree(&self.train.subset(sample)?)?))
    }

    fn scores(&self, model: &Classifier, i: usize) -> Vec<f64> {
        model.predict(&self.train.examples()[i])
    }
}

/// Networks over a training set encoded with statistics from that set.
#[derive(Debug, Clone)]
pub struct NetworkLearner {
    encoder: Arc<Encoder>,
    encoded: Vec<EncodedExample>,
    labels: Vec<usize>,
    classes: usize,
    config: NetworkConfig,
}

impl NetworkLearner {
    /// Fits the encoder on `train` itself.
    pub fn new(train: &Dataset, config: NetworkConfig) -> Result<Self> {
        Self::with_encoder(train, Arc::new(Encoder::fit(train)), config)
    }

    pub fn with_encoder(train: &Dataset, encoder: Arc<Encoder>, config: NetworkConfig) -> Result<Self> {
        config.validate()?;
        let encoded = train.examples().iter().map(|e| encoder.encode(e)).collect();
        Ok(NetworkLearner {
            encoder,
            encoded,
            labels: train.labels(),
            classes: train.schema().class_count(),
            config,
        })
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn encoder(&self) -> &Arc<Encoder> {
        &self.encoder
    }
}

impl BaseLearner for NetworkLearner {
    type Model = Classifier;

    fn kind(&self) -> LearnerKind {
        LearnerKind::Network
    }

    fn len(&self) -> usize {
        self.encoded.len()
    }

    fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    fn class_count(&self) -> usize {
        self.classes
    }

    fn fit(&self, sample: &IndexSample, seed: u64) -> Result<Classifier> {
        let rows = sample
            .iter()
            .map(|&i| {
                self.encoded
                    .get(i)
                    .ok_or_else(|| Error::InvalidArgument(format!("row {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        let model = train_network(&rows, &self.config, seed)?;
        Ok(Classifier::Network {
            model,
            encoder: Arc::clone(&self.encoder),
        })
    }

    fn scores(&self, model: &Classifier, i: usize) -> Vec<f64> {
        match model {
            Classifier::Network { model, .. } => model.scores(&self.encoded[i].inputs),
            Classifier::Tree(_) => unreachable!("network learner holds only networks"),
        }
    }
}
