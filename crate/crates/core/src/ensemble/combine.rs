use std::fmt::{self, Write as _};

use crate::data::Example;
use crate::learners::{argmax, Classifier};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combiner {
    /// Mean of member score vectors.
    AverageScores,
    /// One unit vote per member for its top class.
    PluralityVote,
    /// One vote per member for its top class, weighted by its vote weight.
    WeightedVote,
}

impl fmt::Display for Combiner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Combiner::AverageScores => "average",
            Combiner::PluralityVote => "plurality",
            Combiner::WeightedVote => "weighted",
        })
    }
}

/// Combines the first `prefix` member score vectors.
///
/// Returns the predicted class and the aggregate per-class score: the mean
/// scores, or each class's share of the (weighted) votes. Ties go to the
/// lowest class index.
pub fn combine_scores(
    combiner: Combiner,
    vote_weights: &[f64],
    member_scores: &[Vec<f64>],
    prefix: usize,
) -> Result<(usize, Vec<f64>)> {
    if prefix == 0 || prefix > member_scores.len() {
        return Err(Error::InvalidArgument(format!(
            "prefix {prefix} outside 1..={}",
            member_scores.len()
        )));
    }
    if vote_weights.len() < prefix {
        return Err(Error::Dimension(format!("{} vote weights for {prefix} members", vote_weights.len())));
    }
    let classes = member_scores[0].len();
    let mut agg = vec![0.0; classes];
    let members = &member_scores[..prefix];
    match combiner {
        Combiner::AverageScores => {
            for s in members {
                for (a, x) in agg.iter_mut().zip(s) {
                    *a += x;
                }
            }
            agg.iter_mut().for_each(|a| *a /= prefix as f64);
        }
        Combiner::PluralityVote | Combiner::WeightedVote => {
            let mut total = 0.0;
            for (s, &w) in members.iter().zip(vote_weights) {
                let w = if combiner == Combiner::WeightedVote { w } else { 1.0 };
                agg[argmax(s)] += w;
                total += w;
            }
            if total > 0.0 {
                agg.iter_mut().for_each(|a| *a /= total);
            }
        }
    }
    Ok((argmax(&agg), agg))
}

/// Ordered members with vote weights and a combination rule.
#[derive(Debug, Clone)]
pub struct Ensemble<M> {
    members: Vec<M>,
    vote_weights: Vec<f64>,
    combiner: Combiner,
}

impl<M> Ensemble<M> {
    pub fn new(members: Vec<M>, vote_weights: Vec<f64>, combiner: Combiner) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidArgument("ensemble without members".into()));
        }
        if vote_weights.len() != members.len() {
            return Err(Error::Dimension(format!(
                "{} vote weights for {} members",
                vote_weights.len(),
                members.len()
            )));
        }
        if combiner == Combiner::WeightedVote && vote_weights.iter().any(|&w| w.is_nan() || w <= 0.0) {
            return Err(Error::InvalidArgument("weighted vote needs positive weights".into()));
        }
        Ok(Ensemble {
            members,
            vote_weights,
            combiner,
        })
    }

    pub fn members(&self) -> &[M] {
        &self.members
    }

    pub fn vote_weights(&self) -> &[f64] {
        &self.vote_weights
    }

    pub fn combiner(&self) -> Combiner {
        self.combiner
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Combines the first `prefix` members, scoring each with `scores`.
    pub fn combine_with(&self, prefix: usize, scores: impl Fn(&M) -> Vec<f64>) -> Result<(usize, Vec<f64>)> {
        if prefix == 0 || prefix > self.members.len() {
            return Err(Error::InvalidArgument(format!(
                "prefix {prefix} outside 1..={}",
                self.members.len()
            )));
        }
        let member_scores: Vec<Vec<f64>> = self.members[..prefix].iter().map(scores).collect();
        combine_scores(self.combiner, &self.vote_weights, &member_scores, prefix)
    }

    /// Header line listing the combiner and vote weights.
    pub fn header(&self) -> String {
        let weights = self
            .vote_weights
            .iter()
            .map(|w| format!("{w:.16e}"))
            .collect::<Vec<_>>()
            .join(" ");
        format!("ensemble {} {}\nweights {weights}\n", self.combiner, self.members.len())
    }
}

impl Ensemble<Classifier> {
    pub fn combine(&self, ex: &Example, prefix: usize) -> Result<(usize, Vec<f64>)> {
        self.combine_with(prefix, |m| m.predict(ex))
    }

    /// Header followed by every member's dump.
    pub fn dump(&self) -> String {
        let mut out = self.header();
        for (k, m) in self.members.iter().enumerate() {
            let _ = writeln!(out, "member {k}");
            out.push_str(&m.dump());
        }
        out
    }
}
