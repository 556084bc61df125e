use crate::{Error, Result};

/// Tolerance on the total mass of a [`ProbabilityVector`].
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Error mass at or below which an Ada step counts as error-free.
pub const ZERO_ERROR: f64 = 1e-12;

/// Vote weight of a member that classified every original example correctly.
pub const PERFECT_VOTE_WEIGHT: f64 = 3.0;

/// Vote weight of a member whose weighted error reached 0.5.
pub const WEAK_VOTE_WEIGHT: f64 = 0.001;

/// Per-example sampling distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    /// Validates that entries are finite, non-negative and sum to 1.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        if let Some(i) = p.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidProbabilities(format!("entry {i} is {}", p[i])));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidProbabilities(format!("entries sum to {sum}")));
        }
        Ok(ProbabilityVector(p))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n > 0, "uniform distribution over zero examples");
        ProbabilityVector(vec![1.0 / n as f64; n])
    }

    /// Scales non-negative weights with a positive total to unit mass.
    fn normalized(weights: Vec<f64>) -> Self {
        let total: f64 = weights.iter().sum();
        debug_assert!(total > 0.0);
        ProbabilityVector(weights.into_iter().map(|w| w / total).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_uniform(&self) -> bool {
        let u = 1.0 / self.0.len() as f64;
        self.0.iter().all(|&x| x == u)
    }
}

/// Per-example count of misclassifications by the members built so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MissCountVector(Vec<u32>);

impl MissCountVector {
    pub fn zeros(n: usize) -> Self {
        MissCountVector(vec![0; n])
    }

    pub fn from_counts(m: Vec<u32>) -> Self {
        MissCountVector(m)
    }

    /// Adds one to every entry flagged in `misclassified`.
    pub fn record(&mut self, misclassified: &[bool]) -> Result<()> {
        if misclassified.len() != self.0.len() {
            return Err(Error::Dimension(format!(
                "mask of length {} for {} examples",
                misclassified.len(),
                self.0.len()
            )));
        }
        for (m, &miss) in self.0.iter_mut().zip(misclassified) {
            *m += u32::from(miss);
        }
        Ok(())
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Arc-x4 selection probabilities, `p_i = (1 + m_i^4) / sum_j (1 + m_j^4)`.
pub fn arcing_probabilities(m: &MissCountVector) -> ProbabilityVector {
    assert!(!m.is_empty(), "arcing over zero examples");
    ProbabilityVector::normalized(m.as_slice().iter().map(|&c| 1.0 + f64::from(c).powi(4)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaUpdateResult {
    pub p_next: ProbabilityVector,
    /// `ln((1 - eps) / eps)`, or a fixed weight after a restart.
    pub vote_weight: f64,
    pub restarted: bool,
    /// Probability mass of the misclassified examples.
    pub error: f64,
}

/// One Ada-Boosting step over the original examples.
///
/// With `eps` the mass of the misclassified entries: `eps <= 1e-12` restarts
/// with vote weight 3.0, `eps >= 0.5` restarts with 0.001, otherwise the
/// misclassified entries are scaled by `beta = (1 - eps) / eps`, the vector is
/// renormalized and the vote weight is `ln beta`. Restarts reset to uniform.
pub fn ada_update(p: &ProbabilityVector, misclassified: &[bool]) -> Result<AdaUpdateResult> {
    if misclassified.len() != p.len() {
        return Err(Error::Dimension(format!(
            "mask of length {} for {} probabilities",
            misclassified.len(),
            p.len()
        )));
    }
    let eps: f64 = p
        .as_slice()
        .iter()
        .zip(misclassified)
        .filter(|(_, &m)| m)
        .map(|(x, _)| x)
        .sum();
    let restart = |vote_weight| AdaUpdateResult {
        p_next: ProbabilityVector::uniform(p.len()),
        vote_weight,
        restarted: true,
        error: eps,
    };
    if eps <= ZERO_ERROR {
        return Ok(restart(PERFECT_VOTE_WEIGHT));
    }
    if eps >= 0.5 {
        return Ok(restart(WEAK_VOTE_WEIGHT));
    }
    let beta = (1.0 - eps) / eps;
    let scaled = p
        .as_slice()
        .iter()
        .zip(misclassified)
        .map(|(&x, &m)| if m { x * beta } else { x })
        .collect();
    Ok(AdaUpdateResult {
        p_next: ProbabilityVector::normalized(scaled),
        vote_weight: beta.ln(),
        restarted: false,
        error: eps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn arcing_examples() {
        let p = arcing_probabilities(&MissCountVector::zeros(4));
        assert!(close(p.as_slice(), &[0.25; 4]));
        let p = arcing_probabilities(&MissCountVector::from_counts(vec![1, 0, 0, 0]));
        assert!(close(p.as_slice(), &[0.4, 0.2, 0.2, 0.2]));
        let p = arcing_probabilities(&MissCountVector::from_counts(vec![3, 1, 0, 0]));
        assert!(close(p.as_slice(), &[82.0 / 86.0, 2.0 / 86.0, 1.0 / 86.0, 1.0 / 86.0]));
    }

    #[test]
    fn ada_examples() {
        let u = ProbabilityVector::uniform(4);
        let r = ada_update(&u, &[true, false, false, false]).unwrap();
        assert!(!r.restarted);
        assert!(close(r.p_next.as_slice(), &[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]));
        assert!((r.vote_weight - 3f64.ln()).abs() < 1e-12);

        let r = ada_update(&u, &[false; 4]).unwrap();
        assert!(r.restarted && r.p_next.is_uniform());
        assert_eq!(r.vote_weight, 3.0);

        let r = ada_update(&u, &[true, true, true, false]).unwrap();
        assert!(r.restarted && r.p_next.is_uniform());
        assert_eq!(r.vote_weight, 0.001);

        let r = ada_update(&u, &[true, true, false, false]).unwrap();
        assert!(r.restarted);
        assert_eq!(r.vote_weight, 0.001);

        assert!(ada_update(&u, &[true]).is_err());
    }

    #[test]
    fn validation() {
        assert!(ProbabilityVector::new(vec![0.5, 0.5]).is_ok());
        assert!(ProbabilityVector::new(vec![0.5, 0.5 + 2e-9]).is_err());
        assert!(ProbabilityVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbabilityVector::new(vec![]).is_err());
        assert!(ProbabilityVector::new(vec![f64::NAN, 1.0]).is_err());
    }

    proptest! {
        #[test]
        fn arcing_is_a_distribution(m in prop::collection::vec(0u32..200, 1..50)) {
            let p = arcing_probabilities(&MissCountVector::from_counts(m.clone()));
            prop_assert!(ProbabilityVector::new(p.clone().into_vec()).is_ok());
            let mut rev = m.clone();
            rev.reverse();
            let q = arcing_probabilities(&MissCountVector::from_counts(rev));
            let mut qr = q.into_vec();
            qr.reverse();
            prop_assert!(close(p.as_slice(), &qr));
        }

        #[test]
        fn arcing_equal_counts_is_uniform(c in 0u32..100, n in 1usize..40) {
            let p = arcing_probabilities(&MissCountVector::from_counts(vec![c; n]));
            prop_assert!(p.as_slice().iter().all(|&x| (x - 1.0 / n as f64).abs() < 1e-15));
        }

        #[test]
        fn ada_moves_mass_towards_errors(
            w in prop::collection::vec(0.01f64..1.0, 2..30),
            mask_bits in prop::collection::vec(any::<bool>(), 30),
        ) {
            let total: f64 = w.iter().sum();
            let p = ProbabilityVector::new(w.iter().map(|x| x / total).collect()).unwrap();
            let mask = &mask_bits[..p.len()];
            let r = ada_update(&p, mask).unwrap();
            let sum: f64 = r.p_next.as_slice().iter().sum();
            prop_assert!((sum - 1.0).abs() <= SUM_TOLERANCE);
            if !r.restarted {
                prop_assert!(r.vote_weight > 0.0);
                for ((&old, &new), &miss) in p.as_slice().iter().zip(r.p_next.as_slice()).zip(mask) {
                    if miss { prop_assert!(new > old); } else { prop_assert!(new < old); }
                }
            } else {
                prop_assert!(r.p_next.is_uniform());
            }
        }
    }
}
