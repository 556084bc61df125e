mod common;

use ensbench::data::{EncodedExample, IndexSample};
use ensbench::learners::{
    argmax, grow_tree, prune, train_network, train_tree, upper_error_bound, BaseLearner, NetworkConfig,
    NetworkLearner, TreeLearner, TreeNode, CONFIDENCE,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{Beta, ContinuousCDF};

#[test]
fn tree_fits_votes_closely() {
    let votes = common::load("house-votes-84");
    let tree = train_tree(&votes).unwrap();
    let wrong = votes.examples().iter().filter(|e| argmax(&tree.predict(e)) != e.label).count();
    assert!((wrong as f64 / votes.len() as f64) < 0.05, "{wrong} resubstitution errors");
    assert!(tree.root().leaf_count() < 40);
}

#[test]
fn tree_scores_are_distributions() {
    for name in ["iris", "glass", "credit-a"] {
        let ds = common::load(name);
        let tree = train_tree(&ds).unwrap();
        for e in ds.examples() {
            let s = tree.predict(e);
            assert_eq!(s.len(), ds.schema().class_count());
            assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(s.iter().all(|&x| x >= 0.0));
        }
    }
}

fn sum_estimates(node: &TreeNode) -> f64 {
    node.estimated_errors()
}

#[test]
fn pruning_never_raises_the_estimate() {
    for name in ["breast-cancer-w", "heart-cleveland", "diabetes", "hepatitis"] {
        let ds = common::load(name);
        let grown = grow_tree(&ds);
        let before = sum_estimates(grown.root());
        let pruned = prune(grown.root().clone());
        assert!(sum_estimates(&pruned) <= before + 1e-9, "{name}");
        assert!(pruned.leaf_count() <= grown.root().leaf_count());
    }
}

#[test]
fn error_bound_matches_beta_quantile() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..500 {
        let n = rng.random_range(1..400u32);
        let e = rng.random_range(0..n);
        let ours = upper_error_bound(e as f64, n as f64, CONFIDENCE);
        let oracle = Beta::new(e as f64 + 1.0, (n - e) as f64).unwrap().inverse_cdf(1.0 - CONFIDENCE);
        assert!((ours - oracle).abs() < 1e-6, "e={e} n={n}: {ours} vs {oracle}");
    }
}

fn xor() -> Vec<EncodedExample> {
    [([0.0, 0.0], 0.0), ([0.0, 1.0], 1.0), ([1.0, 0.0], 1.0), ([1.0, 1.0], 0.0)]
        .into_iter()
        .map(|(x, t)| EncodedExample { inputs: x.to_vec(), target: vec![t] })
        .collect()
}

#[test]
fn network_learns_xor() {
    let data = xor();
    let refs: Vec<&EncodedExample> = data.iter().collect();
    let cfg = NetworkConfig::new(5, 2000);
    let solved = (0..10u64)
        .filter(|&seed| {
            let m = train_network(&refs, &cfg, seed).unwrap();
            data.iter().all(|e| (m.forward(&e.inputs)[0] >= 0.5) == (e.target[0] == 1.0))
        })
        .count();
    assert!(solved >= 8, "xor solved on {solved}/10 seeds");
}

#[test]
fn perceptron_separates_margin_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut data = Vec::new();
    while data.len() < 200 {
        let x: Vec<f64> = (0..3).map(|_| rng.random::<f64>()).collect();
        let s = x[0] + x[1] - 1.0;
        if s.abs() > 0.1 {
            data.push(EncodedExample { inputs: x, target: vec![f64::from(u8::from(s > 0.0))] });
        }
    }
    let refs: Vec<&EncodedExample> = data.iter().collect();
    let m = train_network(&refs, &NetworkConfig::new(0, 200), 1).unwrap();
    let wrong = data.iter().filter(|e| (m.forward(&e.inputs)[0] >= 0.5) != (e.target[0] == 1.0)).count();
    assert_eq!(wrong, 0);
}

#[test]
fn learners_are_deterministic() {
    let ds = common::load("iris");
    let sample = IndexSample::new((0..150).step_by(2).collect());
    let net = NetworkLearner::new(&ds, NetworkConfig::new(3, 20)).unwrap();
    let a = net.fit(&sample, 77).unwrap();
    let b = net.fit(&sample, 77).unwrap();
    assert_eq!(a.dump(), b.dump());
    assert_ne!(a.dump(), net.fit(&sample, 78).unwrap().dump());
    for i in 0..ds.len() {
        let s = net.scores(&a, i);
        assert_eq!(s.len(), 3);
    }
    let tree = TreeLearner::new(ds.clone());
    assert_eq!(tree.fit(&sample, 1).unwrap().dump(), tree.fit(&sample, 2).unwrap().dump());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bound_is_monotone(n in 1u32..300, e in 0u32..300) {
        prop_assume!(e < n);
        let u = upper_error_bound(e as f64, n as f64, CONFIDENCE);
        prop_assert!(u > e as f64 / n as f64 && u <= 1.0);
        prop_assert!(upper_error_bound(e as f64 + 1.0, n as f64, CONFIDENCE) >= u);
        prop_assert!(upper_error_bound(e as f64, n as f64 + 1.0, CONFIDENCE) <= u + 1e-12);
    }

    #[test]
    fn bagged_trees_predict_distributions(seed in any::<u64>()) {
        let ds = common::load("iris");
        let learner = TreeLearner::new(ds.clone());
        let sample = ensbench::data::bootstrap_sample(ds.len(), seed);
        let model = learner.fit(&sample, seed).unwrap();
        for i in (0..ds.len()).step_by(7) {
            let s = learner.scores(&model, i);
            prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
