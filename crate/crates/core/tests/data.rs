mod common;

use std::collections::HashSet;

use ensbench::data::{
    bootstrap_sample, encode, gen_one_sided_noise, inject_noise, make_folds, weighted_sample, weighted_sample_checked,
    FeatureValue, NormalizationStats, POSITIVE,
};
use ensbench::ensemble::ProbabilityVector;
use proptest::prelude::*;

#[test]
fn benchmark_shapes() {
    let bcw = common::load("breast-cancer-w");
    assert_eq!(bcw.len(), 699);
    assert_eq!(bcw.schema().feature_count(), 9);
    assert_eq!(bcw.schema().class_count(), 2);
    assert_eq!(bcw.imputation_counts().iter().sum::<usize>(), 16);
    let enc = encode(&bcw, &NormalizationStats::from_dataset(&bcw)).unwrap();
    assert!(enc.iter().all(|e| e.inputs.len() == 9 && e.target.len() == 1));
    assert!(enc.iter().flat_map(|e| &e.inputs).all(|x| (0.0..=1.0).contains(x)));

    let votes = common::load("house-votes-84");
    assert_eq!(votes.schema().input_width(), 16);
    assert_eq!(votes.len(), 435);

    let glass = common::load("glass");
    let enc = encode(&glass, &NormalizationStats::from_dataset(&glass)).unwrap();
    assert!(enc.iter().all(|e| e.target.len() == 6 && e.target.iter().sum::<f64>() == 1.0));
}

#[test]
fn bootstrap_coverage() {
    let n = 1000;
    let mean: f64 = (0..10_000u64)
        .map(|s| bootstrap_sample(n, s).distinct() as f64 / n as f64)
        .sum::<f64>()
        / 10_000.0;
    let expected = 1.0 - (1.0 - 1.0 / n as f64).powi(n as i32);
    assert!((mean - expected).abs() < 0.01, "coverage {mean}");
    assert!((expected - 0.632).abs() < 0.001);
}

#[test]
fn weighted_sample_frequencies() {
    let s = weighted_sample_checked(&[0.7, 0.1, 0.1, 0.1], 100_000, 17).unwrap();
    let f = s.iter().filter(|&&i| i == 0).count() as f64 / 100_000.0;
    assert!((f - 0.7).abs() < 0.005, "frequency {f}");
}

#[test]
fn uniform_weighted_matches_bootstrap_law() {
    let u = ProbabilityVector::uniform(8);
    let mut counts_w = [0usize; 8];
    let mut counts_b = [0usize; 8];
    for seed in 0..5000 {
        for &i in weighted_sample(&u, 8, seed).iter() {
            counts_w[i] += 1;
        }
        for &i in bootstrap_sample(8, seed + 1_000_000).iter() {
            counts_b[i] += 1;
        }
    }
    for k in 0..8 {
        // 40,000 draws per sampler, 1/8 each: sd about 66.
        assert!((counts_w[k] as f64 - 5000.0).abs() < 330.0);
        assert!((counts_b[k] as f64 - 5000.0).abs() < 330.0);
    }
}

#[test]
fn noise_rate_concentrates() {
    let bcw = common::load("breast-cancer-w");
    let ds = bcw.subset(&(0..699).chain(0..301).collect::<Vec<_>>()).unwrap();
    let noisy = inject_noise(&ds, 0.2, 3).unwrap();
    let mut changed = 0;
    for (a, b) in ds.examples().iter().zip(noisy.examples()) {
        changed += a.values.iter().zip(&b.values).filter(|(x, y)| x != y).count();
    }
    let frac = changed as f64 / 9000.0;
    assert!((frac - 0.2).abs() < 0.013, "perturbed {frac}");
    assert_eq!(noisy.len(), ds.len());
    assert_eq!(noisy.schema(), ds.schema());
}

#[test]
fn noise_draws_from_observed_values() {
    let ds = common::load("glass");
    let noisy = inject_noise(&ds, 0.5, 11).unwrap();
    for j in 0..ds.schema().feature_count() {
        let seen: HashSet<u64> = ds
            .examples()
            .iter()
            .filter_map(|e| match e.values[j] {
                FeatureValue::Real(x) => Some(x.to_bits()),
                _ => None,
            })
            .collect();
        for e in noisy.examples() {
            if let FeatureValue::Real(x) = e.values[j] {
                assert!(seen.contains(&x.to_bits()));
            }
        }
    }
}

#[test]
fn true_concept_scores_perfectly_on_clean_test() {
    let p = gen_one_sided_noise(800, 2000, 0.2, 5).unwrap();
    let reals = |e: &ensbench::data::Example| -> Vec<f64> {
        e.values
            .iter()
            .map(|v| match v {
                FeatureValue::Real(x) => *x,
                _ => unreachable!(),
            })
            .collect()
    };
    let test_wrong = p.test.examples().iter().filter(|e| p.concept.side(&reals(e)) != e.label).count();
    assert_eq!(test_wrong, 0);
    let train_wrong = p.train.examples().iter().filter(|e| p.concept.side(&reals(e)) != e.label).count();
    assert_eq!(train_wrong, p.flipped.len());
    assert!(p.flipped.iter().all(|&i| p.concept.side(&reals(&p.train.examples()[i])) == POSITIVE));
}

proptest! {
    #[test]
    fn folds_partition(n in 2usize..400, k in 2usize..12, seed in any::<u64>()) {
        prop_assume!(k <= n);
        let plan = make_folds(n, k, seed).unwrap();
        let mut all: Vec<usize> = (0..k).flat_map(|f| plan.test_rows(f)).collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
        let sizes = plan.sizes();
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        prop_assert_eq!(&plan, &make_folds(n, k, seed).unwrap());
    }

    #[test]
    fn samplers_are_pure(n in 1usize..200, seed in any::<u64>()) {
        prop_assert_eq!(bootstrap_sample(n, seed), bootstrap_sample(n, seed));
        let u = ProbabilityVector::uniform(n);
        prop_assert_eq!(weighted_sample(&u, n, seed), weighted_sample(&u, n, seed));
        prop_assert!(bootstrap_sample(n, seed).iter().all(|&i| i < n));
    }

    #[test]
    fn noise_never_keeps_a_chosen_value(seed in any::<u64>()) {
        let ds = common::load("iris");
        let a = inject_noise(&ds, 1.0, seed).unwrap();
        let b = inject_noise(&ds, 1.0, seed).unwrap();
        prop_assert_eq!(a.examples(), b.examples());
        for (x, y) in ds.examples().iter().zip(a.examples()) {
            prop_assert_ne!(x.label, y.label);
            for (u, v) in x.values.iter().zip(&y.values) {
                prop_assert_ne!(u, v);
            }
        }
    }

    #[test]
    fn generator_flips_only_positive_train(seed in any::<u64>(), noise in 0.0f64..0.9) {
        let p = gen_one_sided_noise(120, 50, noise, seed).unwrap();
        for (i, e) in p.train.examples().iter().enumerate() {
            if p.flipped.binary_search(&i).is_err() {
                let x: Vec<f64> = e.values.iter().map(|v| match v { FeatureValue::Real(x) => *x, _ => 0.0 }).collect();
                prop_assert_eq!(e.label, p.concept.side(&x));
            }
        }
    }
}
