mod common;

use std::collections::BTreeMap;

use ensbench::config::parse_config;
use ensbench::ensemble::Method;
use ensbench::harness::{aggregate, noise_study, run_cv, size_sweep, CellResult};
use ensbench::learners::LearnerKind;

fn key(c: &CellResult) -> (String, LearnerKind, Method, usize, usize, usize) {
    (c.dataset.clone(), c.learner, c.method, c.members, c.run, c.fold)
}

#[test]
fn cv_is_deterministic_and_partitions() {
    let cfg = common::config(&["iris", "house-votes-84"], "tree,network", "single,bagging,ada", 3, 2);
    let a = run_cv(&cfg).unwrap();
    let b = run_cv(&cfg).unwrap();
    assert_eq!(a, b);
    let mut tested: BTreeMap<_, usize> = BTreeMap::new();
    for c in &a {
        *tested.entry((c.dataset.clone(), c.learner, c.method, c.run)).or_default() += c.tested;
        assert!(c.misclassified <= c.tested);
    }
    // 2 datasets x 2 learners x 3 methods x 2 runs.
    assert_eq!(tested.len(), 24);
    for ((d, ..), n) in tested {
        assert_eq!(n, if d == "iris" { 150 } else { 435 });
    }
}

#[test]
fn seed_changes_results() {
    let mut cfg = common::config(&["iris"], "tree", "bagging", 3, 1);
    let a = run_cv(&cfg).unwrap();
    cfg.master_seed = 2;
    assert_ne!(a, run_cv(&cfg).unwrap());
}

#[test]
fn thread_count_does_not_matter() {
    let cfg = common::config(&["iris"], "network", "bagging,arcing", 3, 1);
    let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let a = one.install(|| run_cv(&cfg)).unwrap();
    let b = four.install(|| run_cv(&cfg)).unwrap();
    assert_eq!(a, b);
}

#[test]
fn sweep_top_size_matches_cv() {
    let cfg = common::config(&["iris"], "tree", "bagging,arcing", 6, 1);
    let sweep = size_sweep(&cfg, 6, &[1, 3, 6]).unwrap();
    let full: Vec<_> = sweep.iter().filter(|c| c.members == 6).cloned().collect();
    let mut cv = run_cv(&cfg).unwrap();
    cv.sort_by_key(key);
    let mut full = full;
    full.sort_by_key(key);
    assert_eq!(full, cv);
    assert!(sweep.iter().any(|c| c.members == 1));
}

#[test]
fn zero_noise_replica_is_the_cv_run() {
    let cfg = common::config(&["iris"], "network", "single,bagging", 3, 1);
    let (_, cells) = noise_study(&cfg, &[0.0], 1).unwrap();
    let mut from_noise: Vec<_> = cells.into_iter().filter(|c| [Method::Single, Method::Bagging].contains(&c.method)).collect();
    let mut cv = run_cv(&cfg).unwrap();
    from_noise.sort_by_key(key);
    cv.sort_by_key(key);
    assert_eq!(from_noise, cv);
}

#[test]
fn report_has_one_row_per_pair() {
    let cfg = common::config(&["iris"], "tree,network", "single,simple,bagging", 2, 2);
    let report = aggregate(&run_cv(&cfg).unwrap()).unwrap();
    // simple is skipped for trees.
    assert_eq!(report.len(), 5);
    for r in &report {
        assert!(r.error_mean >= 0.0 && r.error_sd >= 0.0);
        if r.method == Method::Single {
            assert!(r.pct_reduction.is_none() || r.pct_reduction == Some(0.0));
        }
    }
}

#[test]
fn desk_config_parses() {
    let cfg = parse_config(common::data_dir().join("../configs/desk.conf")).unwrap();
    assert_eq!(cfg.master_seed, 1);
    assert_eq!(cfg.datasets.len(), 3);
    assert!(cfg.datasets.iter().all(|d| d.csv.exists() && d.schema.exists()));
    assert_eq!(cfg.pairs().len(), 9);
}
