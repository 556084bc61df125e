mod common;

use ensbench::data::IndexSample;
use ensbench::ensemble::{build, combine_scores, Combiner, Ensemble, Method};
use ensbench::learners::{argmax, BaseLearner, NetworkConfig, NetworkLearner, TreeLearner};
use proptest::prelude::*;

fn scores(classes: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, classes).prop_map(|v| {
        let s: f64 = v.iter().sum::<f64>() + 1e-9;
        v.into_iter().map(|x| x / s).collect()
    })
}

fn members() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>)> {
    (2usize..5, 1usize..12).prop_flat_map(|(c, k)| {
        (prop::collection::vec(scores(c), k), prop::collection::vec(0.001f64..3.0, k))
    })
}

proptest! {
    #[test]
    fn first_member_alone_is_itself((m, w) in members()) {
        for combiner in [Combiner::AverageScores, Combiner::PluralityVote, Combiner::WeightedVote] {
            let (class, _) = combine_scores(combiner, &w, &m, 1).unwrap();
            prop_assert_eq!(class, argmax(&m[0]));
        }
    }

    #[test]
    fn weighted_vote_ignores_scale((m, w) in members(), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = w.iter().map(|x| x * c).collect();
        let a = combine_scores(Combiner::WeightedVote, &w, &m, m.len()).unwrap();
        let b = combine_scores(Combiner::WeightedVote, &scaled, &m, m.len()).unwrap();
        prop_assert_eq!(a.0, b.0);
        for (x, y) in a.1.iter().zip(&b.1) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }

    #[test]
    fn identical_members_agree(s in scores(3), k in 1usize..10) {
        let m = vec![s.clone(); k];
        let w = vec![1.0; k];
        for combiner in [Combiner::AverageScores, Combiner::PluralityVote, Combiner::WeightedVote] {
            prop_assert_eq!(combine_scores(combiner, &w, &m, k).unwrap().0, argmax(&s));
        }
    }

    #[test]
    fn aggregates_sum_to_one((m, w) in members()) {
        for combiner in [Combiner::AverageScores, Combiner::PluralityVote, Combiner::WeightedVote] {
            let (_, agg) = combine_scores(combiner, &w, &m, m.len()).unwrap();
            prop_assert!((agg.iter().sum::<f64>() - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn plurality_equals_unit_weights() {
    let m = vec![vec![0.9, 0.1], vec![0.2, 0.8], vec![0.3, 0.7]];
    let p = combine_scores(Combiner::PluralityVote, &[5.0, 1.0, 1.0], &m, 3).unwrap();
    let w = combine_scores(Combiner::WeightedVote, &[1.0, 1.0, 1.0], &m, 3).unwrap();
    assert_eq!(p, w);
    assert_eq!(p.0, 1);
    assert_eq!(combine_scores(Combiner::WeightedVote, &[5.0, 1.0, 1.0], &m, 3).unwrap().0, 0);
}

#[test]
fn real_ensembles_are_deterministic() {
    let ds = common::load("breast-cancer-w");
    let trees = TreeLearner::new(ds.clone());
    for method in [Method::Bagging, Method::Arcing, Method::Ada] {
        let a = build(method, &trees, 5, 42).unwrap();
        let b = build(method, &trees, 5, 42).unwrap();
        assert_eq!(a.dump(), b.dump(), "{method}");
        assert_eq!(a.len(), 5);
    }
    let nets = NetworkLearner::new(&ds, NetworkConfig::new(3, 5)).unwrap();
    for method in [Method::Simple, Method::Bagging, Method::Ada] {
        let a = build(method, &nets, 3, 8).unwrap();
        assert_eq!(a.dump(), build(method, &nets, 3, 8).unwrap().dump(), "{method}");
    }
}

#[test]
fn single_is_one_full_fit() {
    let ds = common::load("iris");
    let trees = TreeLearner::new(ds.clone());
    let e = build(Method::Single, &trees, 25, 3).unwrap();
    assert_eq!(e.len(), 1);
    let direct = trees.fit(&IndexSample::all(ds.len()), 0).unwrap();
    assert_eq!(e.members()[0].dump(), direct.dump());
}

#[test]
fn ensemble_scores_are_distributions() {
    let ds = common::load("glass");
    let trees = TreeLearner::new(ds.clone());
    let e: Ensemble<_> = build(Method::Ada, &trees, 10, 1).unwrap();
    assert_eq!(e.combiner(), Combiner::WeightedVote);
    for ex in ds.examples().iter().step_by(5) {
        for prefix in [1, 4, 10] {
            let (c, agg) = e.combine(ex, prefix).unwrap();
            assert!((agg.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            assert_eq!(c, argmax(&agg));
        }
    }
}
