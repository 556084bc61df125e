use std::fs;
use std::path::Path;
use std::sync::Arc;

use super::schema::{FeatureKind, Schema};
use super::MISSING_TOKEN;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FeatureValue {
    Real(f64),
    /// Index into the feature's declared value list.
    Discrete(usize),
    Missing,
}

impl FeatureValue {
    pub fn is_missing(self) -> bool {
        matches!(self, FeatureValue::Missing)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub values: Vec<FeatureValue>,
    pub label: usize,
}

impl Example {
    pub fn new(values: Vec<FeatureValue>, label: usize) -> Self {
        Example { values, label }
    }
}

/// A named, schema-conforming, non-empty list of examples.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    schema: Arc<Schema>,
    examples: Vec<Example>,
    imputed: Vec<usize>,
}

impl Dataset {
    pub fn new(name: impl Into<String>, schema: Arc<Schema>, examples: Vec<Example>) -> Result<Self> {
        if examples.is_empty() {
            return Err(Error::InvalidArgument("dataset has no examples".into()));
        }
        for (i, ex) in examples.iter().enumerate() {
            check_example(&schema, ex).map_err(|m| Error::InvalidArgument(format!("example {i}: {m}")))?;
        }
        let imputed = vec![0; schema.feature_count()];
        Ok(Dataset {
            name: name.into(),
            schema,
            examples,
            imputed,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn schema_arc(&self) -> &Arc<Schema> {
        &self.schema
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    pub fn labels(&self) -> Vec<usize> {
        self.examples.iter().map(|e| e.label).collect()
    }

    /// Per-feature count of cells filled in by load-time imputation.
    pub fn imputation_counts(&self) -> &[usize] {
        &self.imputed
    }

    /// A new dataset holding `rows` (in order, duplicates allowed).
    pub fn subset(&self, rows: &[usize]) -> Result<Dataset> {
        if rows.is_empty() {
            return Err(Error::InvalidArgument("empty subset".into()));
        }
        let examples = rows
            .iter()
            .map(|&i| {
                self.examples
                    .get(i)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("row {i} out of range")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Dataset {
            name: self.name.clone(),
            schema: Arc::clone(&self.schema),
            examples,
            imputed: vec![0; self.schema.feature_count()],
        })
    }

    /// Replaces the examples, keeping name and schema. Used by transforms
    /// that preserve conformance (noise injection).
    pub(crate) fn with_examples(&self, examples: Vec<Example>) -> Dataset {
        Dataset {
            name: self.name.clone(),
            schema: Arc::clone(&self.schema),
            examples,
            imputed: self.imputed.clone(),
        }
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Dataset {
        self.name = name.into();
        self
    }
}

fn check_example(schema: &Schema, ex: &Example) -> std::result::Result<(), String> {
    if ex.values.len() != schema.feature_count() {
        return Err(format!(
            "{} values for {} features",
            ex.values.len(),
            schema.feature_count()
        ));
    }
    if ex.label >= schema.class_count() {
        return Err(format!("label {} out of range", ex.label));
    }
    for (v, f) in ex.values.iter().zip(schema.features()) {
        match (v, &f.kind) {
            (FeatureValue::Missing, _) => {}
            (FeatureValue::Real(x), FeatureKind::Continuous) if x.is_finite() => {}
            (FeatureValue::Discrete(i), FeatureKind::Discrete(vals)) if *i < vals.len() => {}
            _ => return Err(format!("value {v:?} does not fit feature '{}'", f.name)),
        }
    }
    Ok(())
}

/// Reads a dataset from a headerless CSV file and its schema sidecar.
///
/// Missing cells (`?`) are imputed: continuous features with the mean of the
/// observed values, discrete features with the modal value (lowest index on
/// ties). The dataset name is the CSV file stem.
pub fn load_dataset(csv_path: impl AsRef<Path>, schema_path: impl AsRef<Path>) -> Result<Dataset> {
    let csv_path = csv_path.as_ref();
    let schema_path = schema_path.as_ref();
    let schema_text = fs::read_to_string(schema_path).map_err(|e| Error::io(schema_path, e))?;
    let schema = Schema::parse(&schema_text, schema_path)?;
    let data = fs::read(csv_path).map_err(|e| Error::io(csv_path, e))?;
    let name = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_rows(&data, csv_path, schema, name)
}

pub(crate) fn parse_rows(data: &[u8], path: &Path, schema: Schema, name: String) -> Result<Dataset> {
    let load_err = |row: usize, column: usize, message: String| Error::Load {
        path: path.to_path_buf(),
        row,
        column,
        message,
    };
    let width = schema.feature_count() + 1;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(data);
    let mut examples = Vec::new();
    for (r, record) in reader.records().enumerate() {
        let row = r + 1;
        let record = record?;
        if record.len() == 1 && record.get(0) == Some("") {
            continue;
        }
        if record.len() != width {
            return Err(load_err(row, record.len(), format!("expected {width} cells, found {}", record.len())));
        }
        let mut values = Vec::with_capacity(width - 1);
        for (c, (cell, feat)) in record.iter().zip(schema.features()).enumerate() {
            let column = c + 1;
            let v = if cell == MISSING_TOKEN {
                FeatureValue::Missing
            } else {
                match &feat.kind {
                    FeatureKind::Continuous => match cell.parse::<f64>() {
                        Ok(x) if x.is_finite() => FeatureValue::Real(x),
                        _ => return Err(load_err(row, column, format!("'{cell}' is not a number"))),
                    },
                    FeatureKind::Discrete(_) => match feat.value_index(cell) {
                        Some(i) => FeatureValue::Discrete(i),
                        None => {
                            return Err(load_err(
                                row,
                                column,
                                format!("undeclared value '{cell}' for feature '{}'", feat.name),
                            ))
                        }
                    },
                }
            };
            values.push(v);
        }
        let label_cell = &record[width - 1];
        let label = schema
            .class_index(label_cell)
            .ok_or_else(|| load_err(row, width, format!("unknown class label '{label_cell}'")))?;
        examples.push(Example { values, label });
    }
    if examples.is_empty() {
        return Err(Error::EmptyDataset {
            path: path.to_path_buf(),
        });
    }
    let imputed = impute(&schema, &mut examples);
    Ok(Dataset {
        name,
        schema: Arc::new(schema),
        examples,
        imputed,
    })
}

fn impute(schema: &Schema, examples: &mut [Example]) -> Vec<usize> {
    let mut counts = vec![0; schema.feature_count()];
    for (j, feat) in schema.features().iter().enumerate() {
        let missing = examples.iter().filter(|e| e.values[j].is_missing()).count();
        if missing == 0 {
            continue;
        }
        let fill = match &feat.kind {
            FeatureKind::Continuous => {
                let (sum, n) = examples.iter().fold((0.0, 0usize), |(s, n), e| match e.values[j] {
                    FeatureValue::Real(x) => (s + x, n + 1),
                    _ => (s, n),
                });
                FeatureValue::Real(if n > 0 { sum / n as f64 } else { 0.0 })
            }
            FeatureKind::Discrete(vals) => {
                let mut tally = vec![0usize; vals.len()];
                for e in examples.iter() {
                    if let FeatureValue::Discrete(i) = e.values[j] {
                        tally[i] += 1;
                    }
                }
                FeatureValue::Discrete(argmax_usize(&tally))
            }
        };
        for e in examples.iter_mut() {
            if e.values[j].is_missing() {
                e.values[j] = fill;
            }
        }
        counts[j] = missing;
    }
    counts
}

/// Index of the largest entry, lowest index on ties.
fn argmax_usize(xs: &[usize]) -> usize {
    let mut best = 0;
    for (i, &x) in xs.iter().enumerate() {
        if x > xs[best] {
            best = i;
        }
    }
    best
}
