use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum FeatureKind {
    Continuous,
    Discrete(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Feature {
    pub name: String,
    pub kind: FeatureKind,
}

impl Feature {
    pub fn continuous(name: impl Into<String>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::Continuous,
        }
    }

    pub fn discrete<S: Into<String>>(name: impl Into<String>, values: impl IntoIterator<Item = S>) -> Self {
        Feature {
            name: name.into(),
            kind: FeatureKind::Discrete(values.into_iter().map(Into::into).collect()),
        }
    }

    pub fn is_continuous(&self) -> bool {
        matches!(self.kind, FeatureKind::Continuous)
    }

    /// Number of declared values, or `None` for continuous features.
    pub fn arity(&self) -> Option<usize> {
        match &self.kind {
            FeatureKind::Continuous => None,
            FeatureKind::Discrete(v) => Some(v.len()),
        }
    }

    /// Width of this feature in the network input encoding.
    pub fn encoded_width(&self) -> usize {
        match self.arity() {
            None | Some(2) => 1,
            Some(k) => k,
        }
    }

    pub fn value_index(&self, token: &str) -> Option<usize> {
        match &self.kind {
            FeatureKind::Continuous => None,
            FeatureKind::Discrete(v) => v.iter().position(|x| x == token),
        }
    }
}

/// Feature layout and class labels of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    features: Vec<Feature>,
    class_values: Vec<String>,
}

impl Schema {
    pub fn new(features: Vec<Feature>, class_values: Vec<String>) -> Result<Self> {
        let mut names = HashSet::new();
        for f in &features {
            if f.name.is_empty() {
                return Err(Error::InvalidArgument("empty feature name".into()));
            }
            if !names.insert(f.name.as_str()) {
                return Err(Error::InvalidArgument(format!("duplicate feature name '{}'", f.name)));
            }
            if let FeatureKind::Discrete(values) = &f.kind {
                check_distinct(values, &format!("feature '{}'", f.name))?;
            }
        }
        check_distinct(&class_values, "class")?;
        Ok(Schema {
            features,
            class_values,
        })
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature_count(&self) -> usize {
        self.features.len()
    }

    pub fn class_values(&self) -> &[String] {
        &self.class_values
    }

    pub fn class_count(&self) -> usize {
        self.class_values.len()
    }

    pub fn class_index(&self, label: &str) -> Option<usize> {
        self.class_values.iter().position(|c| c == label)
    }

    /// Network input width: 1 per continuous or two-valued feature, k per
    /// k-valued feature (k >= 3).
    pub fn input_width(&self) -> usize {
        self.features.iter().map(Feature::encoded_width).sum()
    }

    /// Network output width: 1 for two classes, one per class otherwise.
    pub fn output_width(&self) -> usize {
        if self.class_values.len() == 2 {
            1
        } else {
            self.class_values.len()
        }
    }

    /// Parses the line-oriented schema format:
    ///
    /// ```text
    /// feature <name> continuous
    /// feature <name> discrete v1|v2|...
    /// class c1|c2|...
    /// ```
    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Schema {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut features = Vec::new();
        let mut classes: Option<Vec<String>> = None;
        for (i, raw) in text.lines().enumerate() {
            let lineno = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if classes.is_some() {
                return Err(err(lineno, "content after the class line".into()));
            }
            let mut parts = line.split_whitespace();
            match parts.next() {
                Some("feature") => {
                    let name = parts
                        .next()
                        .ok_or_else(|| err(lineno, "missing feature name".into()))?;
                    let kind = match (parts.next(), parts.next()) {
                        (Some("continuous"), None) => FeatureKind::Continuous,
                        (Some("discrete"), Some(values)) => {
                            FeatureKind::Discrete(values.split('|').map(str::to_owned).collect())
                        }
                        _ => return Err(err(lineno, format!("malformed feature line '{line}'"))),
                    };
                    if parts.next().is_some() {
                        return Err(err(lineno, format!("trailing tokens in '{line}'")));
                    }
                    features.push(Feature {
                        name: name.to_owned(),
                        kind,
                    });
                }
                Some("class") => {
                    let values = parts
                        .next()
                        .ok_or_else(|| err(lineno, "missing class values".into()))?;
                    if parts.next().is_some() {
                        return Err(err(lineno, format!("trailing tokens in '{line}'")));
                    }
                    classes = Some(values.split('|').map(str::to_owned).collect());
                }
                _ => return Err(err(lineno, format!("unknown directive in '{line}'"))),
            }
        }
        let classes = classes.ok_or_else(|| err(text.lines().count().max(1), "missing class line".into()))?;
        Schema::new(features, classes).map_err(|e| err(0, e.to_string()))
    }
}

fn check_distinct(values: &[String], what: &str) -> Result<()> {
    let set: HashSet<&str> = values.iter().map(String::as_str).collect();
    if set.len() != values.len() {
        return Err(Error::InvalidArgument(format!("{what} has repeated values")));
    }
    if values.len() < 2 {
        return Err(Error::InvalidArgument(format!("{what} needs at least 2 distinct values")));
    }
    if values.iter().any(|v| v.is_empty() || v == super::MISSING_TOKEN) {
        return Err(Error::InvalidArgument(format!("{what} declares an empty or '?' value")));
    }
    Ok(())
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for feat in &self.features {
            match &feat.kind {
                FeatureKind::Continuous => writeln!(f, "feature {} continuous", feat.name)?,
                FeatureKind::Discrete(v) => writeln!(f, "feature {} discrete {}", feat.name, v.join("|"))?,
            }
        }
        writeln!(f, "class {}", self.class_values.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<Schema> {
        Schema::parse(text, Path::new("t.schema"))
    }

    #[test]
    fn parses_and_round_trips() {
        let text = "feature a continuous\nfeature b discrete x|y|z\nclass p|q\n";
        let s = parse(text).unwrap();
        assert_eq!(s.feature_count(), 2);
        assert_eq!(s.features()[1].arity(), Some(3));
        assert_eq!(s.input_width(), 4);
        assert_eq!(s.output_width(), 1);
        assert_eq!(s.to_string(), text);
    }

    #[test]
    fn rejects_bad_schemas() {
        assert!(parse("feature a continuous\nfeature a continuous\nclass p|q\n").is_err());
        assert!(parse("feature a discrete x\nclass p|q\n").is_err());
        assert!(parse("feature a continuous\nclass p\n").is_err());
        assert!(parse("feature a continuous\nclass p|p\n").is_err());
        assert!(parse("feature a continuous\n").is_err());
        assert!(parse("feature a real\nclass p|q\n").is_err());
        assert!(parse("class p|q\nfeature a continuous\n").is_err());
    }

    #[test]
    fn error_carries_line_number() {
        match parse("feature a continuous\nbogus\nclass p|q\n") {
            Err(Error::Schema { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }
}
