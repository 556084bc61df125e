use std::collections::BTreeMap;

use super::cv::{cv_cells, load_datasets, CellResult};
use crate::config::ExperimentConfig;
use crate::data::{gen_one_sided_noise, inject_noise};
use crate::ensemble::{build, combine_scores, Method};
use crate::learners::{argmax, LearnerKind, NetworkConfig, NetworkLearner};
use crate::par;
use crate::seed::SeedPath;
use crate::{Error, Result};

/// Network methods compared in the noise study.
pub const NOISE_METHODS: [Method; 5] = [Method::Single, Method::Simple, Method::Bagging, Method::Arcing, Method::Ada];

/// Mean error of one method on one dataset at one noise level, in percent,
/// with its advantage over the single network in percentage points.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseRow {
    pub dataset: String,
    pub level: f64,
    pub method: Method,
    pub error_mean: f64,
    pub single_error: f64,
    pub reduction: f64,
}

/// Seed of replica `replica` of `dataset` at noise `level`.
pub fn noise_seed(master: u64, dataset: &str, level: f64, replica: usize) -> u64 {
    SeedPath::new(master)
        .with("noise")
        .with(dataset)
        .with((level * 1e6).round() as u64)
        .with(replica)
        .seed()
}

/// Noise robustness of network ensembles.
///
/// Each configured dataset gets `replicas` independently perturbed copies per
/// level; each copy goes through one k-fold CV (run index = replica) for the
/// single network and every network ensemble. Errors average over replicas.
pub fn noise_study(config: &ExperimentConfig, levels: &[f64], replicas: usize) -> Result<(Vec<NoiseRow>, Vec<CellResult>)> {
    config.validate()?;
    if replicas == 0 {
        return Err(Error::InvalidArgument("replicas must be at least 1".into()));
    }
    if let Some(l) = levels.iter().find(|l| !(0.0..=1.0).contains(*l)) {
        return Err(Error::InvalidArgument(format!("noise level {l} outside [0,1]")));
    }
    if levels.is_empty() {
        return Err(Error::InvalidArgument("no noise levels".into()));
    }
    let datasets = load_datasets(config)?;
    let pairs: Vec<(LearnerKind, Method)> = NOISE_METHODS.iter().map(|&m| (LearnerKind::Network, m)).collect();
    let mut rows = Vec::new();
    let mut all_cells = Vec::new();
    for ds in &datasets {
        for &level in levels {
            let mut cells = Vec::new();
            for r in 0..replicas {
                let noisy = inject_noise(ds, level, noise_seed(config.master_seed, ds.name(), level, r))?;
                cells.extend(cv_cells(config, &[noisy], &pairs, &[r], config.members)?);
            }
            let mut per_method: BTreeMap<Method, BTreeMap<usize, (usize, usize)>> = BTreeMap::new();
            for c in &cells {
                let e = per_method.entry(c.method).or_default().entry(c.run).or_default();
                e.0 += c.misclassified;
                e.1 += c.tested;
            }
            let mean = |m: Method| {
                let runs = &per_method[&m];
                runs.values().map(|&(a, b)| 100.0 * a as f64 / b as f64).sum::<f64>() / runs.len() as f64
            };
            let single = mean(Method::Single);
            for m in NOISE_METHODS {
                let e = mean(m);
                rows.push(NoiseRow {
                    dataset: ds.name().to_owned(),
                    level,
                    method: m,
                    error_mean: e,
                    single_error: single,
                    reduction: single - e,
                });
            }
            all_cells.extend(cells);
        }
    }
    Ok((rows, all_cells))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticOptions {
    pub datasets: usize,
    pub noise: f64,
    pub max_members: usize,
    pub eval_sizes: Vec<usize>,
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    /// Ensembles trained per dataset and method; their aggregate scores are
    /// averaged before taking the predicted class.
    pub ensembles: usize,
    pub methods: Vec<Method>,
    pub network: NetworkConfig,
}

impl Default for SyntheticOptions {
    fn default() -> Self {
        SyntheticOptions {
            datasets: 5,
            noise: 0.2,
            max_members: 100,
            eval_sizes: vec![1, 5, 10, 15, 20, 25, 50, 75, 100],
            seed: 1,
            n_train: 800,
            n_test: 2000,
            ensembles: 5,
            methods: vec![Method::Bagging, Method::Arcing, Method::Ada],
            network: NetworkConfig::new(0, 20),
        }
    }
}

/// Clean-test error in percent for one dataset (0-based) or the mean over
/// datasets (`None`).
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticRow {
    pub dataset: Option<usize>,
    pub method: Method,
    pub members: usize,
    pub error: f64,
}

/// Perceptron ensembles on one-sided-noise problems, scored on clean test
/// sets at each ensemble size.
pub fn synthetic_study(opts: &SyntheticOptions) -> Result<Vec<SyntheticRow>> {
    if opts.datasets == 0 || opts.ensembles == 0 {
        return Err(Error::InvalidArgument("need at least one dataset and one ensemble".into()));
    }
    super::cv::check_sizes(opts.max_members, &opts.eval_sizes)?;
    let mut sizes = opts.eval_sizes.clone();
    sizes.sort_unstable();
    sizes.dedup();
    let root = SeedPath::new(opts.seed).with("synthetic");
    let problems = par::try_map_range(opts.datasets, |d| {
        let p = gen_one_sided_noise(opts.n_train, opts.n_test, opts.noise, root.with(d).with("data").seed())?;
        let learner = NetworkLearner::new(&p.train, opts.network)?;
        Ok::<_, Error>((p, learner))
    })?;

    let mut tasks = Vec::new();
    for d in 0..opts.datasets {
        for &m in &opts.methods {
            for e in 0..opts.ensembles {
                tasks.push((d, m, e));
            }
        }
    }
    // Aggregate score vectors per test example and prefix size.
    let scored = par::try_map(tasks, |(d, m, e)| {
        let (p, learner) = &problems[d];
        let ens = build(m, learner, opts.max_members, root.with(d).with(m.as_str()).with(e).seed())?;
        let mut out = vec![Vec::with_capacity(p.test.len()); sizes.len()];
        for ex in p.test.examples() {
            let member_scores: Vec<Vec<f64>> = ens.members().iter().map(|c| c.predict(ex)).collect();
            for (k, &s) in sizes.iter().enumerate() {
                out[k].push(combine_scores(ens.combiner(), ens.vote_weights(), &member_scores, s)?.1);
            }
        }
        Ok::<_, Error>(((d, m), out))
    })?;

    let mut sums: BTreeMap<(usize, Method), Vec<Vec<Vec<f64>>>> = BTreeMap::new();
    for (key, out) in scored {
        match sums.get_mut(&key) {
            None => {
                sums.insert(key, out);
            }
            Some(acc) => {
                for (a_size, o_size) in acc.iter_mut().zip(out) {
                    for (a, o) in a_size.iter_mut().zip(o_size) {
                        a.iter_mut().zip(o).for_each(|(x, y)| *x += y);
                    }
                }
            }
        }
    }
    let mut rows = Vec::new();
    for ((d, m), per_size) in &sums {
        let test = &problems[*d].0.test;
        for (k, &s) in sizes.iter().enumerate() {
            let wrong = per_size[k]
                .iter()
                .zip(test.examples())
                .filter(|(agg, ex)| argmax(agg) != ex.label)
                .count();
            rows.push(SyntheticRow {
                dataset: Some(*d),
                method: *m,
                members: s,
                error: 100.0 * wrong as f64 / test.len() as f64,
            });
        }
    }
    let mut mean: BTreeMap<(Method, usize), Vec<f64>> = BTreeMap::new();
    for r in &rows {
        mean.entry((r.method, r.members)).or_default().push(r.error);
    }
    rows.extend(mean.into_iter().map(|((method, members), errs)| SyntheticRow {
        dataset: None,
        method,
        members,
        error: errs.iter().sum::<f64>() / errs.len() as f64,
    }));
    Ok(rows)
}
