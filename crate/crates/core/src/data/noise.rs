use rand::Rng as _;

use super::dataset::{Dataset, Example, FeatureValue};
use super::schema::FeatureKind;
use crate::seed;
use crate::{Error, Result};

/// Perturbs every feature cell and every label independently with
/// probability `rate`.
///
/// A perturbed value is replaced by a different value drawn uniformly from
/// its domain: the other declared values for discrete features and labels,
/// and the other distinct values observed anywhere in `dataset` for
/// continuous features. Cells whose domain has no alternative are left as is.
pub fn inject_noise(dataset: &Dataset, rate: f64, seed: u64) -> Result<Dataset> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(Error::InvalidArgument(format!("noise rate {rate} outside [0,1]")));
    }
    let schema = dataset.schema();
    let observed: Vec<Vec<f64>> = schema
        .features()
        .iter()
        .enumerate()
        .map(|(j, f)| match f.kind {
            FeatureKind::Continuous => {
                let mut vals: Vec<f64> = dataset
                    .examples()
                    .iter()
                    .filter_map(|e| match e.values[j] {
                        FeatureValue::Real(x) => Some(x),
                        _ => None,
                    })
                    .collect();
                vals.sort_by(f64::total_cmp);
                vals.dedup();
                vals
            }
            FeatureKind::Discrete(_) => Vec::new(),
        })
        .collect();

    let mut rng = seed::rng(seed);
    let classes = schema.class_count();
    let examples = dataset
        .examples()
        .iter()
        .map(|ex| {
            let values = ex
                .values
                .iter()
                .zip(schema.features())
                .zip(&observed)
                .map(|((&v, feat), pool)| {
                    if rng.random::<f64>() >= rate {
                        return v;
                    }
                    match (&feat.kind, v) {
                        (FeatureKind::Discrete(vals), FeatureValue::Discrete(cur)) => {
                            FeatureValue::Discrete(other_index(vals.len(), cur, &mut rng))
                        }
                        (FeatureKind::Discrete(vals), _) => FeatureValue::Discrete(rng.random_range(0..vals.len())),
                        (FeatureKind::Continuous, FeatureValue::Real(cur)) => {
                            match pool.binary_search_by(|p| p.total_cmp(&cur)) {
                                Ok(pos) if pool.len() > 1 => FeatureValue::Real(pool[other_index(pool.len(), pos, &mut rng)]),
                                Ok(_) => v,
                                Err(_) if !pool.is_empty() => FeatureValue::Real(pool[rng.random_range(0..pool.len())]),
                                Err(_) => v,
                            }
                        }
                        (FeatureKind::Continuous, _) if !pool.is_empty() => {
                            FeatureValue::Real(pool[rng.random_range(0..pool.len())])
                        }
                        _ => v,
                    }
                })
                .collect();
            let label = if rng.random::<f64>() < rate {
                other_index(classes, ex.label, &mut rng)
            } else {
                ex.label
            };
            Example { values, label }
        })
        .collect();
    Ok(dataset.with_examples(examples))
}

/// Uniform index in `0..n` other than `current` (requires n >= 2).
fn other_index(n: usize, current: usize, rng: &mut seed::Rng) -> usize {
    let r = rng.random_range(0..n - 1);
    if r >= current {
        r + 1
    } else {
        r
    }
}
