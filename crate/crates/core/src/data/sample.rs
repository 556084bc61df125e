use std::ops::Deref;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::ensemble::ProbabilityVector;
use crate::seed;
use crate::{Error, Result};

/// Assignment of example indices to cross-validation folds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoldPlan {
    assignment: Vec<usize>,
    k: usize,
    seed: u64,
}

impl FoldPlan {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Fold index of every example.
    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Indices of the examples held out in `fold`, ascending.
    pub fn test_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] == fold)
            .collect()
    }

    /// Indices of the examples used for training when `fold` is held out.
    pub fn train_rows(&self, fold: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&i| self.assignment[i] != fold)
            .collect()
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.assignment {
            sizes[f] += 1;
        }
        sizes
    }
}

/// Seeded shuffle of `0..n` dealt round-robin into `k` folds.
pub fn make_folds(n: usize, k: usize, seed: u64) -> Result<FoldPlan> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!("fold count must be at least 2, got {k}")));
    }
    if k > n {
        return Err(Error::InvalidArgument(format!("{k} folds requested for {n} examples")));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(seed));
    let mut assignment = vec![0; n];
    for (pos, &idx) in order.iter().enumerate() {
        assignment[idx] = pos % k;
    }
    Ok(FoldPlan { assignment, k, seed })
}

/// An ordered multiset of example indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexSample(Vec<usize>);

impl IndexSample {
    pub fn new(indices: Vec<usize>) -> Self {
        IndexSample(indices)
    }

    /// The identity sample `0..n`.
    pub fn all(n: usize) -> Self {
        IndexSample((0..n).collect())
    }

    pub fn into_vec(self) -> Vec<usize> {
        self.0
    }

    /// Number of distinct indices present.
    pub fn distinct(&self) -> usize {
        let mut seen = self.0.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }
}

impl Deref for IndexSample {
    type Target = [usize];

    fn deref(&self) -> &[usize] {
        &self.0
    }
}

/// `n` uniform draws with replacement from `0..n`.
pub fn bootstrap_sample(n: usize, seed: u64) -> IndexSample {
    let mut rng = seed::rng(seed);
    IndexSample((0..n).map(|_| rng.random_range(0..n)).collect())
}

/// `n` independent draws where index `i` has probability `p[i]`.
pub fn weighted_sample(p: &ProbabilityVector, n: usize, seed: u64) -> IndexSample {
    let mut cumulative = Vec::with_capacity(p.len());
    let mut acc = 0.0;
    for &x in p.as_slice() {
        acc += x;
        cumulative.push(acc);
    }
    // Rounding can leave the total a hair below 1; fall back to the last
    // index that carries mass.
    let last = p.as_slice().iter().rposition(|&x| x > 0.0).unwrap_or(0);
    let mut rng = seed::rng(seed);
    let draws = (0..n)
        .map(|_| {
            let u: f64 = rng.random::<f64>() * acc;
            cumulative.partition_point(|&c| c <= u).min(last)
        })
        .collect();
    IndexSample(draws)
}

/// [`weighted_sample`] over raw weights, validated as a probability vector.
pub fn weighted_sample_checked(p: &[f64], n: usize, seed: u64) -> Result<IndexSample> {
    let p = ProbabilityVector::new(p.to_vec())?;
    Ok(weighted_sample(&p, n, seed))
}
