use std::collections::BTreeMap;

use super::cv::CellResult;
use super::stats::mean_sd;
use crate::ensemble::Method;
use crate::learners::LearnerKind;
use crate::{Error, Result};

/// Summary of one (dataset, learner, method); error figures in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub dataset: String,
    pub learner: LearnerKind,
    pub method: Method,
    pub error_mean: f64,
    pub error_sd: f64,
    /// Lowest per-run error of the single classifier.
    pub best_single: Option<f64>,
    /// `100 * (single - method) / single`.
    pub pct_reduction: Option<f64>,
    /// `method / single`.
    pub ratio: Option<f64>,
}

type Key = (String, LearnerKind, Method);

/// Per-run (misclassified, tested) totals.
type RunTotals<T> = BTreeMap<usize, (T, T)>;

/// Per-run errors keyed by (dataset, learner, method), from per-fold
/// numerators and denominators.
pub(crate) fn aggregate_runs(
    folds: impl IntoIterator<Item = (Key, usize, usize, f64, f64)>,
) -> Result<Vec<ReportRow>> {
    let mut groups: BTreeMap<Key, (Option<usize>, RunTotals<f64>)> = BTreeMap::new();
    for (key, members, run, num, den) in folds {
        let g = groups.entry(key.clone()).or_default();
        match g.0 {
            Some(m) if m != members => {
                return Err(Error::Results(format!(
                    "{}/{}/{} mixes ensemble sizes {m} and {members}",
                    key.0, key.1, key.2
                )))
            }
            _ => g.0 = Some(members),
        }
        let r = g.1.entry(run).or_insert((0.0, 0.0));
        r.0 += num;
        r.1 += den;
    }
    if groups.is_empty() {
        return Err(Error::Results("no results to aggregate".into()));
    }
    let per_run: BTreeMap<Key, Vec<f64>> = groups
        .into_iter()
        .map(|(k, (_, runs))| (k, runs.values().map(|(n, d)| 100.0 * n / d).collect()))
        .collect();
    let mut rows = Vec::with_capacity(per_run.len());
    for ((dataset, learner, method), errors) in &per_run {
        let (error_mean, error_sd) = mean_sd(errors);
        let single = per_run.get(&(dataset.clone(), *learner, Method::Single));
        let best_single = single.map(|s| s.iter().copied().fold(f64::INFINITY, f64::min));
        let single_mean = single.map(|s| mean_sd(s).0);
        let pct_reduction = single_mean.filter(|&s| s > 0.0).map(|s| 100.0 * (s - error_mean) / s);
        let ratio = single_mean.filter(|&s| s > 0.0).map(|s| error_mean / s);
        rows.push(ReportRow {
            dataset: dataset.clone(),
            learner: *learner,
            method: *method,
            error_mean,
            error_sd,
            best_single,
            pct_reduction,
            ratio,
        });
    }
    Ok(rows)
}

/// Per-run error is total misclassified over total tested across the run's
/// folds; means and population SDs are taken across runs.
pub fn aggregate(cells: &[CellResult]) -> Result<Vec<ReportRow>> {
    aggregate_runs(cells.iter().map(|c| {
        (
            (c.dataset.clone(), c.learner, c.method),
            c.members,
            c.run,
            c.misclassified as f64,
            c.tested as f64,
        )
    }))
}

/// Looks up `method / single` ratios per dataset for one learner.
pub fn error_ratios(report: &[ReportRow], learner: LearnerKind, method: Method) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for r in report.iter().filter(|r| r.learner == learner && r.method == method) {
        let ratio = r.ratio.ok_or_else(|| {
            Error::Results(format!("no single {learner} baseline with positive error for '{}'", r.dataset))
        })?;
        out.insert(r.dataset.clone(), ratio);
    }
    Ok(out)
}

/// Mean error per (dataset, learner, method, members) across runs, plus a
/// `composite` dataset averaging the per-dataset errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub dataset: String,
    pub learner: LearnerKind,
    pub method: Method,
    pub members: usize,
    pub error_mean: f64,
}

pub const COMPOSITE: &str = "composite";

pub fn sweep_curve(cells: &[CellResult]) -> Vec<CurvePoint> {
    let mut runs: BTreeMap<(String, LearnerKind, Method, usize), RunTotals<usize>> = BTreeMap::new();
    for c in cells {
        let r = runs
            .entry((c.dataset.clone(), c.learner, c.method, c.members))
            .or_default()
            .entry(c.run)
            .or_default();
        r.0 += c.misclassified;
        r.1 += c.tested;
    }
    let mut points: Vec<CurvePoint> = runs
        .into_iter()
        .map(|((dataset, learner, method, members), rs)| {
            let errs: Vec<f64> = rs.values().map(|&(m, t)| 100.0 * m as f64 / t as f64).collect();
            CurvePoint {
                dataset,
                learner,
                method,
                members,
                error_mean: mean_sd(&errs).0,
            }
        })
        .collect();
    let mut composite: BTreeMap<(LearnerKind, Method, usize), Vec<f64>> = BTreeMap::new();
    for p in &points {
        composite.entry((p.learner, p.method, p.members)).or_default().push(p.error_mean);
    }
    points.extend(composite.into_iter().map(|((learner, method, members), errs)| CurvePoint {
        dataset: COMPOSITE.into(),
        learner,
        method,
        members,
        error_mean: mean_sd(&errs).0,
    }));
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cell(method: Method, run: usize, fold: usize, mis: usize, tested: usize) -> CellResult {
        CellResult {
            dataset: "d".into(),
            learner: LearnerKind::Tree,
            method,
            members: if method == Method::Single { 1 } else { 25 },
            run,
            fold,
            misclassified: mis,
            tested,
        }
    }

    #[test]
    fn constant_series_has_zero_sd() {
        let cells: Vec<CellResult> = (0..5).map(|r| cell(Method::Single, r, 0, 17, 500)).collect();
        let rep = aggregate(&cells).unwrap();
        assert!((rep[0].error_mean - 3.4).abs() < 1e-12);
        assert_eq!(rep[0].error_sd, 0.0);
    }

    #[test]
    fn per_run_error_pools_folds() {
        let cells = vec![
            cell(Method::Single, 0, 0, 1, 10),
            cell(Method::Single, 0, 1, 0, 11),
            cell(Method::Single, 1, 0, 2, 10),
            cell(Method::Single, 1, 1, 2, 11),
        ];
        let rep = aggregate(&cells).unwrap();
        let runs = [100.0 / 21.0, 400.0 / 21.0];
        assert!((rep[0].error_mean - (runs[0] + runs[1]) / 2.0).abs() < 1e-12);
        assert!((rep[0].best_single.unwrap() - runs[0]).abs() < 1e-12);
    }

    #[test]
    fn reduction_and_ratio() {
        let mut cells: Vec<CellResult> = (0..5).map(|r| cell(Method::Single, r, 0, 10, 100)).collect();
        cells.extend((0..5).map(|r| cell(Method::Bagging, r, 0, 5, 100)));
        let rep = aggregate(&cells).unwrap();
        let bag = rep.iter().find(|r| r.method == Method::Bagging).unwrap();
        assert!((bag.pct_reduction.unwrap() - 50.0).abs() < 1e-12);
        assert!((bag.ratio.unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(bag.best_single, Some(10.0));
        let ratios = error_ratios(&rep, LearnerKind::Tree, Method::Bagging).unwrap();
        assert_eq!(ratios["d"], 0.5);
    }

    #[test]
    fn missing_baseline_is_reported() {
        let cells: Vec<CellResult> = (0..2).map(|r| cell(Method::Ada, r, 0, 5, 100)).collect();
        let rep = aggregate(&cells).unwrap();
        assert_eq!(rep[0].ratio, None);
        assert!(error_ratios(&rep, LearnerKind::Tree, Method::Ada).is_err());
        assert!(aggregate(&[]).is_err());
    }

    #[test]
    fn mixed_sizes_rejected_and_curve_composite() {
        let mut a = cell(Method::Bagging, 0, 0, 5, 100);
        let mut b = a.clone();
        b.members = 5;
        assert!(aggregate(&[a.clone(), b.clone()]).is_err());
        a.dataset = "e".into();
        b.misclassified = 9;
        let curve = sweep_curve(&[a, b]);
        let comp: Vec<&CurvePoint> = curve.iter().filter(|p| p.dataset == COMPOSITE).collect();
        assert_eq!(comp.len(), 2);
    }
}
