use std::fmt;
use std::str::FromStr;

use super::combine::{Combiner, Ensemble};
use super::prob::{ada_update, arcing_probabilities, MissCountVector, ProbabilityVector};
use crate::data::{bootstrap_sample, weighted_sample, IndexSample};
use crate::learners::{argmax, BaseLearner, LearnerKind};
use crate::par;
use crate::seed::SeedPath;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Single,
    Simple,
    Bagging,
    Arcing,
    Ada,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Single, Method::Simple, Method::Bagging, Method::Arcing, Method::Ada];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Single => "single",
            Method::Simple => "simple",
            Method::Bagging => "bagging",
            Method::Arcing => "arcing",
            Method::Ada => "ada",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown method '{s}'")))
    }
}

fn member_path(seed: u64, k: usize) -> SeedPath {
    SeedPath::new(seed).with("member").with(k)
}

/// Builds `method` with `members` members (a single classifier for
/// [`Method::Single`]).
pub fn build<L: BaseLearner>(method: Method, learner: &L, members: usize, seed: u64) -> Result<Ensemble<L::Model>> {
    match method {
        Method::Single => {
            let model = learner.fit(&IndexSample::all(learner.len()), member_path(seed, 0).with("fit").seed())?;
            Ensemble::new(vec![model], vec![1.0], Combiner::AverageScores)
        }
        Method::Simple => build_simple(learner, members, seed),
        Method::Bagging => build_bagging(learner, members, seed),
        Method::Arcing => build_arcing(learner, members, seed),
        Method::Ada => build_ada(learner, members, seed),
    }
}

fn check(learner: &impl BaseLearner, members: usize) -> Result<()> {
    if members == 0 {
        return Err(Error::InvalidArgument("members must be at least 1".into()));
    }
    if learner.is_empty() {
        return Err(Error::InvalidArgument("no training examples".into()));
    }
    Ok(())
}

/// Members trained on independent bootstrap replicates.
pub fn build_bagging<L: BaseLearner>(learner: &L, members: usize, seed: u64) -> Result<Ensemble<L::Model>> {
    check(learner, members)?;
    let n = learner.len();
    let models = par::try_map_range(members, |k| {
        let path = member_path(seed, k);
        learner.fit(&bootstrap_sample(n, path.with("sample").seed()), path.with("fit").seed())
    })?;
    let combiner = match learner.kind() {
        LearnerKind::Network => Combiner::AverageScores,
        LearnerKind::Tree => Combiner::PluralityVote,
    };
    Ensemble::new(models, vec![1.0; members], combiner)
}

/// Networks trained on the full set from different random starts.
pub fn build_simple<L: BaseLearner>(learner: &L, members: usize, seed: u64) -> Result<Ensemble<L::Model>> {
    check(learner, members)?;
    let seeds: Vec<u64> = (0..members).map(|k| member_path(seed, k).with("fit").seed()).collect();
    build_simple_seeded(learner, &seeds)
}

/// [`build_simple`] with an explicit fit seed per member.
pub fn build_simple_seeded<L: BaseLearner>(learner: &L, seeds: &[u64]) -> Result<Ensemble<L::Model>> {
    if learner.kind() != LearnerKind::Network {
        return Err(Error::Unsupported("simple ensembles require the network learner".into()));
    }
    check(learner, seeds.len())?;
    let all = IndexSample::all(learner.len());
    let models = par::try_map(seeds.to_vec(), |s| learner.fit(&all, s))?;
    Ensemble::new(models, vec![1.0; seeds.len()], Combiner::AverageScores)
}

/// Which original examples `model` gets wrong.
fn misclassified<L: BaseLearner>(learner: &L, model: &L::Model) -> Vec<bool> {
    par::map_range(learner.len(), |i| argmax(&learner.scores(model, i)) != learner.label(i))
}

/// Arc-x4: each member samples with probability proportional to
/// `1 + m_i^4`, `m_i` counting earlier misclassifications of original `i`.
pub fn build_arcing<L: BaseLearner>(learner: &L, members: usize, seed: u64) -> Result<Ensemble<L::Model>> {
    check(learner, members)?;
    let n = learner.len();
    let mut misses = MissCountVector::zeros(n);
    let mut models = Vec::with_capacity(members);
    for k in 0..members {
        let path = member_path(seed, k);
        let p = arcing_probabilities(&misses);
        let model = learner.fit(&weighted_sample(&p, n, path.with("sample").seed()), path.with("fit").seed())?;
        misses.record(&misclassified(learner, &model))?;
        models.push(model);
    }
    Ensemble::new(models, vec![1.0; members], Combiner::PluralityVote)
}

/// Ada-Boosting by resampling, restarting from uniform when a member's
/// weighted error is zero or at least 0.5. Every member is kept.
pub fn build_ada<L: BaseLearner>(learner: &L, members: usize, seed: u64) -> Result<Ensemble<L::Model>> {
    check(learner, members)?;
    let n = learner.len();
    let mut p = ProbabilityVector::uniform(n);
    let mut models = Vec::with_capacity(members);
    let mut weights = Vec::with_capacity(members);
    for k in 0..members {
        let path = member_path(seed, k);
        let model = learner.fit(&weighted_sample(&p, n, path.with("sample").seed()), path.with("fit").seed())?;
        let step = ada_update(&p, &misclassified(learner, &model))?;
        p = step.p_next;
        weights.push(step.vote_weight);
        models.push(model);
    }
    Ensemble::new(models, weights, Combiner::WeightedVote)
}
