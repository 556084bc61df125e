use std::sync::Arc;

use super::dataset::{Dataset, Example, FeatureValue};
use super::schema::{FeatureKind, Schema};
use crate::{Error, Result};

/// A network-ready example: inputs in [0,1] and a 0/1 target vector.
#[derive(Debug, Clone, PartialEq)]
pub struct EncodedExample {
    pub inputs: Vec<f64>,
    pub target: Vec<f64>,
}

/// Per-feature min/max of continuous features over a reference subset.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizationStats {
    ranges: Vec<Option<(f64, f64)>>,
}

impl NormalizationStats {
    /// Computes ranges over every example of `reference`.
    pub fn from_dataset(reference: &Dataset) -> Self {
        let schema = reference.schema();
        let ranges = schema
            .features()
            .iter()
            .enumerate()
            .map(|(j, f)| match f.kind {
                FeatureKind::Continuous => {
                    let mut lo = f64::INFINITY;
                    let mut hi = f64::NEG_INFINITY;
                    for e in reference.examples() {
                        if let FeatureValue::Real(x) = e.values[j] {
                            lo = lo.min(x);
                            hi = hi.max(x);
                        }
                    }
                    Some(if lo <= hi { (lo, hi) } else { (0.0, 0.0) })
                }
                FeatureKind::Discrete(_) => None,
            })
            .collect();
        NormalizationStats { ranges }
    }

    pub fn from_ranges(ranges: Vec<Option<(f64, f64)>>) -> Self {
        NormalizationStats { ranges }
    }

    pub fn range(&self, feature: usize) -> Option<(f64, f64)> {
        self.ranges.get(feature).copied().flatten()
    }
}

/// Schema-aware example encoder with fixed normalization.
#[derive(Debug, Clone)]
pub struct Encoder {
    schema: Arc<Schema>,
    stats: NormalizationStats,
}

impl Encoder {
    pub fn new(schema: Arc<Schema>, stats: NormalizationStats) -> Result<Self> {
        for (j, f) in schema.features().iter().enumerate() {
            if f.is_continuous() {
                match stats.range(j) {
                    Some((lo, hi)) if lo <= hi => {}
                    Some(_) => return Err(Error::InvalidArgument(format!("min > max for feature '{}'", f.name))),
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "no normalization range for continuous feature '{}'",
                            f.name
                        )))
                    }
                }
            }
        }
        Ok(Encoder { schema, stats })
    }

    /// Encoder whose ranges come from `reference`.
    pub fn fit(reference: &Dataset) -> Self {
        Encoder {
            schema: Arc::clone(reference.schema_arc()),
            stats: NormalizationStats::from_dataset(reference),
        }
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn input_width(&self) -> usize {
        self.schema.input_width()
    }

    pub fn output_width(&self) -> usize {
        self.schema.output_width()
    }

    /// Appends the input encoding of `ex` to `out`.
    ///
    /// Missing values encode as 0.5 for single-input features and as an
    /// all-zero block for one-hot features.
    pub fn encode_inputs_into(&self, ex: &Example, out: &mut Vec<f64>) {
        for (j, (feat, v)) in self.schema.features().iter().zip(&ex.values).enumerate() {
            match (&feat.kind, *v) {
                (FeatureKind::Continuous, FeatureValue::Real(x)) => {
                    let (lo, hi) = self.stats.range(j).unwrap_or((0.0, 0.0));
                    out.push(scale(x, lo, hi));
                }
                (FeatureKind::Discrete(vals), FeatureValue::Discrete(i)) if vals.len() == 2 => {
                    out.push(i as f64);
                }
                (FeatureKind::Discrete(vals), FeatureValue::Discrete(i)) => {
                    out.extend((0..vals.len()).map(|k| if k == i { 1.0 } else { 0.0 }));
                }
                (kind, _) => match kind {
                    FeatureKind::Discrete(vals) if vals.len() > 2 => out.extend(std::iter::repeat_n(0.0, vals.len())),
                    _ => out.push(0.5),
                },
            }
        }
    }

    pub fn encode_inputs(&self, ex: &Example) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.input_width());
        self.encode_inputs_into(ex, &mut out);
        out
    }

    pub fn encode_target(&self, label: usize) -> Vec<f64> {
        if self.schema.class_count() == 2 {
            vec![label as f64]
        } else {
            (0..self.schema.class_count())
                .map(|k| if k == label { 1.0 } else { 0.0 })
                .collect()
        }
    }

    pub fn encode(&self, ex: &Example) -> EncodedExample {
        EncodedExample {
            inputs: self.encode_inputs(ex),
            target: self.encode_target(ex.label),
        }
    }
}

fn scale(x: f64, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        ((x - lo) / (hi - lo)).clamp(0.0, 1.0)
    } else {
        0.5
    }
}

/// Encodes every example of `dataset` with the given normalization.
pub fn encode(dataset: &Dataset, stats: &NormalizationStats) -> Result<Vec<EncodedExample>> {
    let enc = Encoder::new(Arc::clone(dataset.schema_arc()), stats.clone())?;
    Ok(dataset.examples().iter().map(|e| enc.encode(e)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::schema::Feature;

    fn schema() -> Arc<Schema> {
        Arc::new(
            Schema::new(
                vec![
                    Feature::continuous("x"),
                    Feature::discrete("b", ["n", "y"]),
                    Feature::discrete("t", ["r", "g", "b"]),
                ],
                vec!["a".into(), "b".into(), "c".into()],
            )
            .unwrap(),
        )
    }

    #[test]
    fn layout_and_one_hot() {
        let s = schema();
        let ds = Dataset::new(
            "t",
            Arc::clone(&s),
            vec![
                Example::new(vec![FeatureValue::Real(2.0), FeatureValue::Discrete(1), FeatureValue::Discrete(1)], 2),
                Example::new(vec![FeatureValue::Real(4.0), FeatureValue::Discrete(0), FeatureValue::Discrete(0)], 0),
            ],
        )
        .unwrap();
        let enc = Encoder::fit(&ds);
        assert_eq!(enc.input_width(), 5);
        let e = enc.encode(&ds.examples()[0]);
        assert_eq!(e.inputs, vec![0.0, 1.0, 0.0, 1.0, 0.0]);
        assert_eq!(e.target, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn clamps_and_handles_degenerate_range() {
        let s = schema();
        let stats = NormalizationStats::from_ranges(vec![Some((0.0, 10.0)), None, None]);
        let enc = Encoder::new(Arc::clone(&s), stats).unwrap();
        let ex = |x| Example::new(vec![FeatureValue::Real(x), FeatureValue::Discrete(0), FeatureValue::Discrete(2)], 0);
        assert_eq!(enc.encode_inputs(&ex(25.0))[0], 1.0);
        assert_eq!(enc.encode_inputs(&ex(-3.0))[0], 0.0);
        assert_eq!(enc.encode_inputs(&ex(2.5))[0], 0.25);
        let flat = Encoder::new(s, NormalizationStats::from_ranges(vec![Some((3.0, 3.0)), None, None])).unwrap();
        assert_eq!(flat.encode_inputs(&ex(7.0))[0], 0.5);
    }

    #[test]
    fn missing_stats_rejected() {
        assert!(Encoder::new(schema(), NormalizationStats::from_ranges(vec![None, None, None])).is_err());
    }
}
