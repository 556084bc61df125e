//! Experiment configuration and its line-oriented text format.
//!
//! ```text
//! # comment
//! master_seed = 7
//! dataset = iris, data/iris.csv, data/iris.schema
//! learners = tree,network
//! methods = single,bagging,arcing,ada,simple
//! members = 25
//! cv_runs = 5
//! cv_folds = 10
//! hidden.iris = 5
//! epochs.iris = 80
//! ```
//!
//! Relative dataset paths resolve against the directory of the config file.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::ensemble::Method;
use crate::learners::LearnerKind;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSpec {
    pub name: String,
    pub csv: PathBuf,
    pub schema: PathBuf,
}

/// Per-dataset replacements for the preset network shape.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NetworkOverride {
    pub hidden: Option<usize>,
    pub epochs: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub master_seed: u64,
    pub datasets: Vec<DatasetSpec>,
    pub learners: Vec<LearnerKind>,
    pub methods: Vec<Method>,
    pub members: usize,
    pub cv_runs: usize,
    pub cv_folds: usize,
    pub network: BTreeMap<String, NetworkOverride>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            master_seed: 1,
            datasets: Vec::new(),
            learners: vec![LearnerKind::Tree, LearnerKind::Network],
            methods: vec![Method::Single, Method::Simple, Method::Bagging, Method::Arcing, Method::Ada],
            members: 25,
            cv_runs: 5,
            cv_folds: 10,
            network: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidConfig(m.into()));
        if self.members < 1 {
            return bad("members must be ≥ 1");
        }
        if self.cv_runs < 1 {
            return bad("cv_runs must be ≥ 1");
        }
        if self.cv_folds < 2 {
            return bad("cv_folds must be ≥ 2");
        }
        if self.datasets.is_empty() {
            return bad("no datasets configured");
        }
        if self.learners.is_empty() {
            return bad("no learners configured");
        }
        if self.methods.is_empty() {
            return bad("no methods configured");
        }
        if self.methods.contains(&Method::Simple) && !self.learners.contains(&LearnerKind::Network) {
            return bad("simple requires network learner");
        }
        let mut names = HashSet::new();
        for d in &self.datasets {
            if !names.insert(d.name.as_str()) {
                return Err(Error::InvalidConfig(format!("duplicate dataset name '{}'", d.name)));
            }
        }
        for name in self.network.keys() {
            if !names.contains(name.as_str()) {
                return Err(Error::InvalidConfig(format!("network override for unknown dataset '{name}'")));
            }
        }
        Ok(())
    }

    /// The (learner, method) pairs that run: simple only with networks.
    pub fn pairs(&self) -> Vec<(LearnerKind, Method)> {
        let mut out = Vec::new();
        for &l in &self.learners {
            for &m in &self.methods {
                if m != Method::Simple || l == LearnerKind::Network {
                    out.push((l, m));
                }
            }
        }
        out
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |xs: Vec<&str>| xs.join(",");
        writeln!(f, "master_seed = {}", self.master_seed)?;
        for d in &self.datasets {
            writeln!(f, "dataset = {},{},{}", d.name, d.csv.display(), d.schema.display())?;
        }
        writeln!(f, "learners = {}", join(self.learners.iter().map(|l| l.as_str()).collect()))?;
        writeln!(f, "methods = {}", join(self.methods.iter().map(|m| m.as_str()).collect()))?;
        writeln!(f, "members = {}", self.members)?;
        writeln!(f, "cv_runs = {}", self.cv_runs)?;
        writeln!(f, "cv_folds = {}", self.cv_folds)?;
        for (name, o) in &self.network {
            if let Some(h) = o.hidden {
                writeln!(f, "hidden.{name} = {h}")?;
            }
            if let Some(e) = o.epochs {
                writeln!(f, "epochs.{name} = {e}")?;
            }
        }
        Ok(())
    }
}

/// Reads and validates a config file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_config_str(&text, base)
}

/// Parses config text, resolving relative paths against `base`.
pub fn parse_config_str(text: &str, base: &Path) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::default();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Config { line, message };
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| err(format!("expected 'key = value', found '{content}'")))?;
        if value.is_empty() {
            return Err(err(format!("empty value for '{key}'")));
        }
        if key != "dataset" && !seen.insert(key.to_owned()) {
            return Err(err(format!("'{key}' given twice")));
        }
        let count = |v: &str| v.parse::<usize>().map_err(|_| err(format!("'{v}' is not a count")));
        match key {
            "master_seed" => cfg.master_seed = value.parse().map_err(|_| err(format!("'{value}' is not a seed")))?,
            "members" => {
                cfg.members = count(value)?;
                if cfg.members < 1 {
                    return Err(err("members must be ≥ 1".into()));
                }
            }
            "cv_runs" => {
                cfg.cv_runs = count(value)?;
                if cfg.cv_runs < 1 {
                    return Err(err("cv_runs must be ≥ 1".into()));
                }
            }
            "cv_folds" => {
                cfg.cv_folds = count(value)?;
                if cfg.cv_folds < 2 {
                    return Err(err("cv_folds must be ≥ 2".into()));
                }
            }
            "learners" => {
                cfg.learners = dedup(
                    list(value)
                        .into_iter()
                        .map(|s| s.parse().map_err(|_| err(format!("unknown learner '{s}'"))))
                        .collect::<Result<_>>()?,
                );
            }
            "methods" => {
                cfg.methods = dedup(
                    list(value)
                        .into_iter()
                        .map(|s| s.parse().map_err(|_| err(format!("unknown method '{s}'"))))
                        .collect::<Result<_>>()?,
                );
            }
            "dataset" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                let [name, csv, schema] = parts[..] else {
                    return Err(err(format!("expected 'name,csv,schema', found '{value}'")));
                };
                if name.is_empty() || csv.is_empty() || schema.is_empty() {
                    return Err(err(format!("expected 'name,csv,schema', found '{value}'")));
                }
                if cfg.datasets.iter().any(|d| d.name == name) {
                    return Err(err(format!("duplicate dataset name '{name}'")));
                }
                cfg.datasets.push(DatasetSpec {
                    name: name.to_owned(),
                    csv: base.join(csv),
                    schema: base.join(schema),
                });
            }
            _ => {
                let Some((field, name)) = key.split_once('.') else {
                    return Err(err(format!("unknown key '{key}'")));
                };
                let o = cfg.network.entry(name.to_owned()).or_default();
                match field {
                    "hidden" => o.hidden = Some(count(value)?),
                    "epochs" => {
                        let e = count(value)?;
                        if e < 1 {
                            return Err(err("epochs must be ≥ 1".into()));
                        }
                        o.epochs = Some(e);
                    }
                    _ => return Err(err(format!("unknown key '{key}'"))),
                }
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

fn list(v: &str) -> Vec<&str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn dedup<T: PartialEq>(xs: Vec<T>) -> Vec<T> {
    let mut out = Vec::with_capacity(xs.len());
    for x in xs {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}
