use std::sync::Arc;

use crate::config::ExperimentConfig;
use crate::data::{load_dataset, make_folds, Dataset, Encoder, FoldPlan};
use crate::ensemble::{build, combine_scores, Ensemble, Method};
use crate::learners::{lookup_network_config, Classifier, LearnerKind, NetworkConfig, NetworkLearner, TreeLearner};
use crate::par;
use crate::seed::SeedPath;
use crate::{Error, Result};

/// Test-fold outcome of one (dataset, learner, method, members, run, fold).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellResult {
    pub dataset: String,
    pub learner: LearnerKind,
    pub method: Method,
    pub members: usize,
    pub run: usize,
    pub fold: usize,
    pub misclassified: usize,
    pub tested: usize,
}

impl CellResult {
    /// Test error as a fraction.
    pub fn error(&self) -> f64 {
        self.misclassified as f64 / self.tested as f64
    }
}

/// Loads every configured dataset, named as in the config.
pub fn load_datasets(config: &ExperimentConfig) -> Result<Vec<Dataset>> {
    config
        .datasets
        .iter()
        .map(|d| Ok(load_dataset(&d.csv, &d.schema)?.renamed(d.name.clone())))
        .collect()
}

/// Network shape for `dataset`: the preset or fallback rule, then any
/// config overrides.
pub fn network_config_for(config: &ExperimentConfig, dataset: &Dataset) -> NetworkConfig {
    let s = dataset.schema();
    let mut c = lookup_network_config(dataset.name(), s.input_width(), s.output_width(), dataset.len());
    if let Some(o) = config.network.get(dataset.name()) {
        c.hidden_units = o.hidden.unwrap_or(c.hidden_units);
        c.epochs = o.epochs.unwrap_or(c.epochs);
    }
    c
}

/// Seed path of one cross-validation run. Folds are drawn independently for
/// every learner and method.
pub fn run_path(master: u64, dataset: &str, learner: LearnerKind, method: Method, run: usize) -> SeedPath {
    SeedPath::new(master)
        .with("cv")
        .with(dataset)
        .with(learner.as_str())
        .with(method.as_str())
        .with(run)
}

/// Repeated k-fold cross-validation over every configured dataset, learner
/// and method.
pub fn run_cv(config: &ExperimentConfig) -> Result<Vec<CellResult>> {
    config.validate()?;
    let datasets = load_datasets(config)?;
    let runs: Vec<usize> = (0..config.cv_runs).collect();
    cv_cells(config, &datasets, &config.pairs(), &runs, config.members)
}

/// Builds each ensemble once with `max_members` members and scores every
/// prefix size in `eval_sizes`.
pub fn size_sweep(config: &ExperimentConfig, max_members: usize, eval_sizes: &[usize]) -> Result<Vec<CellResult>> {
    config.validate()?;
    check_sizes(max_members, eval_sizes)?;
    let datasets = load_datasets(config)?;
    let runs: Vec<usize> = (0..config.cv_runs).collect();
    let mut sizes = eval_sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    cv_cells_prefixes(config, &datasets, &config.pairs(), &runs, max_members, &sizes)
}

pub(crate) fn check_sizes(max_members: usize, eval_sizes: &[usize]) -> Result<()> {
    if eval_sizes.is_empty() {
        return Err(Error::InvalidArgument("no evaluation sizes".into()));
    }
    if eval_sizes.contains(&0) {
        return Err(Error::InvalidArgument("evaluation sizes must be at least 1".into()));
    }
    let largest = eval_sizes.iter().copied().max().unwrap_or(0);
    if largest > max_members {
        return Err(Error::InvalidArgument(format!(
            "evaluation size {largest} exceeds max members {max_members}"
        )));
    }
    Ok(())
}

/// Cross-validation cells for the given runs.
pub(crate) fn cv_cells(
    config: &ExperimentConfig,
    datasets: &[Dataset],
    pairs: &[(LearnerKind, Method)],
    runs: &[usize],
    members: usize,
) -> Result<Vec<CellResult>> {
    cv_cells_prefixes(config, datasets, pairs, runs, members, &[members])
}

struct Task<'a> {
    dataset: &'a Dataset,
    learner: LearnerKind,
    method: Method,
    run: usize,
    fold: usize,
    plan: Arc<FoldPlan>,
    seed: u64,
}

fn cv_cells_prefixes(
    config: &ExperimentConfig,
    datasets: &[Dataset],
    pairs: &[(LearnerKind, Method)],
    runs: &[usize],
    max_members: usize,
    prefixes: &[usize],
) -> Result<Vec<CellResult>> {
    let mut tasks = Vec::new();
    for ds in datasets {
        for &(learner, method) in pairs {
            for &run in runs {
                let path = run_path(config.master_seed, ds.name(), learner, method, run);
                let plan = Arc::new(make_folds(ds.len(), config.cv_folds, path.with("folds").seed())?);
                for fold in 0..config.cv_folds {
                    tasks.push(Task {
                        dataset: ds,
                        learner,
                        method,
                        run,
                        fold,
                        plan: Arc::clone(&plan),
                        seed: path.with("fold").with(fold).seed(),
                    });
                }
            }
        }
    }
    let nested = par::try_map(tasks, |t| run_fold(config, &t, max_members, prefixes))?;
    Ok(nested.into_iter().flatten().collect())
}

fn run_fold(config: &ExperimentConfig, t: &Task<'_>, max_members: usize, prefixes: &[usize]) -> Result<Vec<CellResult>> {
    let train = t.dataset.subset(&t.plan.train_rows(t.fold))?;
    let test = t.plan.test_rows(t.fold);
    let (members, prefixes) = if t.method == Method::Single {
        (1, vec![1])
    } else {
        (max_members, prefixes.to_vec())
    };
    let ensemble = match t.learner {
        LearnerKind::Tree => build(t.method, &TreeLearner::new(train), members, t.seed)?,
        LearnerKind::Network => {
            let cfg = network_config_for(config, t.dataset);
            let learner = NetworkLearner::with_encoder(&train, Arc::new(Encoder::fit(&train)), cfg)?;
            build(t.method, &learner, members, t.seed)?
        }
    };
    let labels: Vec<usize> = test.iter().map(|&i| t.dataset.examples()[i].label).collect();
    let misses = count_prefix_errors(&ensemble, t.dataset, &test, &labels, &prefixes)?;
    Ok(prefixes
        .iter()
        .zip(misses)
        .map(|(&p, misclassified)| CellResult {
            dataset: t.dataset.name().to_owned(),
            learner: t.learner,
            method: t.method,
            members: p,
            run: t.run,
            fold: t.fold,
            misclassified,
            tested: test.len(),
        })
        .collect())
}

/// Misclassified counts over `rows` for each prefix size; every member scores
/// every row once.
fn count_prefix_errors(
    ensemble: &Ensemble<Classifier>,
    dataset: &Dataset,
    rows: &[usize],
    labels: &[usize],
    prefixes: &[usize],
) -> Result<Vec<usize>> {
    let mut misses = vec![0; prefixes.len()];
    for (&i, &label) in rows.iter().zip(labels) {
        let ex = &dataset.examples()[i];
        let scores: Vec<Vec<f64>> = ensemble.members().iter().map(|m| m.predict(ex)).collect();
        for (k, &p) in prefixes.iter().enumerate() {
            let (class, _) = combine_scores(ensemble.combiner(), ensemble.vote_weights(), &scores, p)?;
            misses[k] += usize::from(class != label);
        }
    }
    Ok(misses)
}
