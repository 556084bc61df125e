use std::fmt::Write as _;
use std::sync::Arc;

use crate::data::{Dataset, Example, FeatureKind, FeatureValue, Schema};
use crate::{Error, Result};

/// Confidence factor of the pessimistic pruning bound.
pub const CONFIDENCE: f64 = 0.25;

/// Nodes with fewer examples are not split.
pub const MIN_SPLIT: usize = 4;

/// Every accepted split sends at least this many examples to two branches.
pub const MIN_BRANCH: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum Split {
    /// `value <= threshold` goes left.
    Threshold { threshold: f64, left: Box<TreeNode>, right: Box<TreeNode> },
    /// One child per declared value.
    Values(Vec<TreeNode>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum TreeNode {
    Leaf {
        counts: Vec<usize>,
        class: usize,
    },
    Internal {
        feature: usize,
        split: Split,
        /// Training class counts reaching this node.
        counts: Vec<usize>,
    },
}

impl TreeNode {
    pub fn counts(&self) -> &[usize] {
        match self {
            TreeNode::Leaf { counts, .. } | TreeNode::Internal { counts, .. } => counts,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeNode::Leaf { .. })
    }

    fn children(&self) -> Vec<&TreeNode> {
        match self {
            TreeNode::Leaf { .. } => Vec::new(),
            TreeNode::Internal { split: Split::Threshold { left, right, .. }, .. } => vec![left, right],
            TreeNode::Internal { split: Split::Values(c), .. } => c.iter().collect(),
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            _ => self.children().iter().map(|c| c.leaf_count()).sum(),
        }
    }

    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// Pessimistic error estimate: the sum over leaves of `N * U(E, N)`.
    pub fn estimated_errors(&self) -> f64 {
        match self {
            TreeNode::Leaf { counts, class } => leaf_estimate(counts, *class),
            _ => self.children().iter().map(|c| c.estimated_errors()).sum(),
        }
    }
}

/// A trained decision tree.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    root: TreeNode,
    schema: Arc<Schema>,
}

impl Tree {
    pub fn root(&self) -> &TreeNode {
        &self.root
    }

    pub fn class_count(&self) -> usize {
        self.schema.class_count()
    }

    /// Class frequencies of the leaf reached by `ex`.
    pub fn predict(&self, ex: &Example) -> Vec<f64> {
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { counts, class } => return leaf_scores(counts, *class),
                TreeNode::Internal { feature, split, .. } => {
                    node = match (split, ex.values[*feature]) {
                        (Split::Threshold { threshold, left, right }, FeatureValue::Real(x)) => {
                            if x <= *threshold {
                                left
                            } else {
                                right
                            }
                        }
                        (Split::Values(children), FeatureValue::Discrete(v)) if v < children.len() => &children[v],
                        _ => heaviest_child(node),
                    }
                }
            }
        }
    }

    /// Indented text dump.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        dump_node(&self.root, &self.schema, 0, &mut out);
        out
    }
}

fn heaviest_child(node: &TreeNode) -> &TreeNode {
    let children = node.children();
    let mut best = children[0];
    for c in &children[1..] {
        if c.counts().iter().sum::<usize>() > best.counts().iter().sum::<usize>() {
            best = c;
        }
    }
    best
}

fn leaf_scores(counts: &[usize], class: usize) -> Vec<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        (0..counts.len()).map(|k| if k == class { 1.0 } else { 0.0 }).collect()
    } else {
        counts.iter().map(|&c| c as f64 / total as f64).collect()
    }
}

fn dump_node(node: &TreeNode, schema: &Schema, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let counts = node.counts().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",");
    match node {
        TreeNode::Leaf { class, .. } => {
            let _ = writeln!(out, "{pad}leaf {} [{counts}]", schema.class_values()[*class]);
        }
        TreeNode::Internal { feature, split, .. } => {
            let feat = &schema.features()[*feature];
            match split {
                Split::Threshold { threshold, left, right } => {
                    let _ = writeln!(out, "{pad}{} <= {threshold} [{counts}]", feat.name);
                    dump_node(left, schema, depth + 1, out);
                    let _ = writeln!(out, "{pad}{} > {threshold}", feat.name);
                    dump_node(right, schema, depth + 1, out);
                }
                Split::Values(children) => {
                    let _ = writeln!(out, "{pad}split {} [{counts}]", feat.name);
                    let values = match &feat.kind {
                        FeatureKind::Discrete(v) => v.clone(),
                        FeatureKind::Continuous => Vec::new(),
                    };
                    for (v, child) in values.iter().zip(children) {
                        let _ = writeln!(out, "{pad}{} = {v}", feat.name);
                        dump_node(child, schema, depth + 1, out);
                    }
                }
            }
        }
    }
}

fn entropy(counts: &[usize]) -> f64 {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let n = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum()
}

/// Information gain of a split, in bits.
pub fn information_gain(branches: &[Vec<usize>]) -> f64 {
    let classes = branches.iter().map(Vec::len).max().unwrap_or(0);
    let mut parent = vec![0usize; classes];
    for b in branches {
        for (k, &c) in b.iter().enumerate() {
            parent[k] += c;
        }
    }
    let total: usize = parent.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let child: f64 = branches
        .iter()
        .map(|b| b.iter().sum::<usize>() as f64 / total as f64 * entropy(b))
        .sum();
    entropy(&parent) - child
}

/// Entropy of the branch-size distribution, in bits.
pub fn split_info(branches: &[Vec<usize>]) -> f64 {
    let sizes: Vec<usize> = branches.iter().map(|b| b.iter().sum()).collect();
    entropy(&sizes)
}

/// Information gain divided by split information; 0 when the latter is 0.
pub fn gain_ratio(branches: &[Vec<usize>]) -> f64 {
    let si = split_info(branches);
    if si <= 0.0 {
        0.0
    } else {
        information_gain(branches) / si
    }
}

/// Upper limit of the one-sided binomial confidence interval on the error
/// rate of a leaf with `errors` misclassified out of `n` cases, at confidence
/// factor `cf`. This is the exact (Clopper-Pearson) bound: the `p` solving
/// `P(X <= errors; n, p) = cf`.
pub fn upper_error_bound(errors: f64, n: f64, cf: f64) -> f64 {
    if n <= 0.0 {
        return 0.0;
    }
    if errors <= 0.0 {
        return 1.0 - cf.powf(1.0 / n);
    }
    if errors >= n {
        return 1.0;
    }
    let (e, n_int) = (errors.floor() as u64, n.round() as u64);
    let (mut lo, mut hi) = (errors / n, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if binomial_cdf(e, n_int, mid) > cf {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `P(X <= k)` for `X ~ Binomial(n, p)`, summed in log space.
fn binomial_cdf(k: u64, n: u64, p: f64) -> f64 {
    if p <= 0.0 {
        return 1.0;
    }
    if p >= 1.0 {
        return if k >= n { 1.0 } else { 0.0 };
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let mut log_term = n as f64 * lq;
    let mut terms = Vec::with_capacity(k as usize + 1);
    terms.push(log_term);
    for i in 0..k.min(n) {
        log_term += ((n - i) as f64).ln() - ((i + 1) as f64).ln() + lp - lq;
        terms.push(log_term);
    }
    let max = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (max.exp() * terms.iter().map(|t| (t - max).exp()).sum::<f64>()).min(1.0)
}

fn leaf_estimate(counts: &[usize], class: usize) -> f64 {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return 0.0;
    }
    let errors = n - counts[class];
    n as f64 * upper_error_bound(errors as f64, n as f64, CONFIDENCE)
}

fn majority(counts: &[usize]) -> usize {
    let mut best = 0;
    for (k, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = k;
        }
    }
    best
}

fn class_counts(examples: &[&Example], classes: usize) -> Vec<usize> {
    let mut counts = vec![0; classes];
    for e in examples {
        counts[e.label] += 1;
    }
    counts
}

enum Candidate {
    Threshold(f64),
    Values,
}

struct Scored {
    feature: usize,
    candidate: Candidate,
    gain: f64,
    ratio: f64,
}

/// Grows a gain-ratio tree on `train` and prunes it by subtree replacement.
pub fn train_tree(train: &Dataset) -> Result<Tree> {
    if train.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if train.schema().feature_count() == 0 {
        return Err(Error::InvalidArgument("no features to split on".into()));
    }
    let tree = grow_tree(train);
    Ok(Tree {
        root: prune(tree.root),
        schema: tree.schema,
    })
}

/// Grows the tree without pruning.
pub fn grow_tree(train: &Dataset) -> Tree {
    let classes = train.schema().class_count();
    let rows: Vec<&Example> = train.examples().iter().collect();
    let top = majority(&class_counts(&rows, classes));
    let root = grow(train.schema(), rows, classes, top);
    Tree {
        root,
        schema: Arc::clone(train.schema_arc()),
    }
}

fn grow(schema: &Schema, rows: Vec<&Example>, classes: usize, parent_majority: usize) -> TreeNode {
    let counts = class_counts(&rows, classes);
    if rows.is_empty() {
        return TreeNode::Leaf { counts, class: parent_majority };
    }
    let class = majority(&counts);
    let leaf = |counts| TreeNode::Leaf { counts, class };
    if rows.len() < MIN_SPLIT || counts[class] == rows.len() {
        return leaf(counts);
    }
    let Some(best) = choose_split(schema, &rows, classes) else {
        return leaf(counts);
    };
    let split = match best.candidate {
        Candidate::Threshold(t) => {
            let (l, r): (Vec<&Example>, Vec<&Example>) = rows.into_iter().partition(|e| match e.values[best.feature] {
                FeatureValue::Real(x) => x <= t,
                _ => true,
            });
            Split::Threshold {
                threshold: t,
                left: Box::new(grow(schema, l, classes, class)),
                right: Box::new(grow(schema, r, classes, class)),
            }
        }
        Candidate::Values => {
            let arity = schema.features()[best.feature].arity().unwrap_or(0);
            let mut parts: Vec<Vec<&Example>> = vec![Vec::new(); arity];
            for e in rows {
                if let FeatureValue::Discrete(v) = e.values[best.feature] {
                    parts[v].push(e);
                }
            }
            Split::Values(parts.into_iter().map(|p| grow(schema, p, classes, class)).collect())
        }
    };
    TreeNode::Internal {
        feature: best.feature,
        split,
        counts,
    }
}

fn choose_split(schema: &Schema, rows: &[&Example], classes: usize) -> Option<Scored> {
    let mut candidates = Vec::new();
    for (j, feat) in schema.features().iter().enumerate() {
        let found = match feat.kind {
            FeatureKind::Continuous => best_threshold(rows, j, classes),
            FeatureKind::Discrete(ref vals) => discrete_split(rows, j, vals.len(), classes),
        };
        if let Some(s) = found {
            candidates.push(s);
        }
    }
    let positive: Vec<&Scored> = candidates.iter().filter(|c| c.gain > 1e-12).collect();
    if positive.is_empty() {
        return None;
    }
    let average = positive.iter().map(|c| c.gain).sum::<f64>() / positive.len() as f64;
    let mut best: Option<usize> = None;
    for (i, c) in candidates.iter().enumerate() {
        if c.gain <= 1e-12 || c.gain < average - 1e-9 {
            continue;
        }
        if best.is_none_or(|b| c.ratio > candidates[b].ratio) {
            best = Some(i);
        }
    }
    best.map(|i| candidates.swap_remove(i))
}

fn discrete_split(rows: &[&Example], j: usize, arity: usize, classes: usize) -> Option<Scored> {
    let mut branches = vec![vec![0usize; classes]; arity];
    for e in rows {
        if let FeatureValue::Discrete(v) = e.values[j] {
            branches[v][e.label] += 1;
        }
    }
    let big = branches.iter().filter(|b| b.iter().sum::<usize>() >= MIN_BRANCH).count();
    if big < 2 {
        return None;
    }
    Some(Scored {
        feature: j,
        candidate: Candidate::Values,
        gain: information_gain(&branches),
        ratio: gain_ratio(&branches),
    })
}

fn best_threshold(rows: &[&Example], j: usize, classes: usize) -> Option<Scored> {
    let mut pairs: Vec<(f64, usize)> = rows
        .iter()
        .filter_map(|e| match e.values[j] {
            FeatureValue::Real(x) => Some((x, e.label)),
            _ => None,
        })
        .collect();
    if pairs.len() < 2 * MIN_BRANCH {
        return None;
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut left = vec![0usize; classes];
    let mut right = vec![0usize; classes];
    for &(_, y) in &pairs {
        right[y] += 1;
    }
    let mut best: Option<(f64, f64, Vec<Vec<usize>>)> = None;
    for i in 0..pairs.len() - 1 {
        left[pairs[i].1] += 1;
        right[pairs[i].1] -= 1;
        let n_left = i + 1;
        if pairs[i].0 == pairs[i + 1].0 || n_left < MIN_BRANCH || pairs.len() - n_left < MIN_BRANCH {
            continue;
        }
        let branches = vec![left.clone(), right.clone()];
        let gain = information_gain(&branches);
        if best.as_ref().is_none_or(|b| gain > b.0 + 1e-12) {
            let threshold = 0.5 * (pairs[i].0 + pairs[i + 1].0);
            best = Some((gain, threshold, branches));
        }
    }
    best.map(|(gain, threshold, branches)| Scored {
        feature: j,
        candidate: Candidate::Threshold(threshold),
        gain,
        ratio: gain_ratio(&branches),
    })
}

/// Bottom-up subtree replacement: a subtree becomes a leaf when the leaf's
/// pessimistic error estimate is no larger than the subtree's.
pub fn prune(node: TreeNode) -> TreeNode {
    match node {
        TreeNode::Leaf { .. } => node,
        TreeNode::Internal { feature, split, counts } => {
            let split = match split {
                Split::Threshold { threshold, left, right } => Split::Threshold {
                    threshold,
                    left: Box::new(prune(*left)),
                    right: Box::new(prune(*right)),
                },
                Split::Values(children) => Split::Values(children.into_iter().map(prune).collect()),
            };
            let node = TreeNode::Internal { feature, split, counts };
            let class = majority(node.counts());
            let as_leaf = leaf_estimate(node.counts(), class);
            if as_leaf <= node.estimated_errors() {
                TreeNode::Leaf {
                    counts: node.counts().to_vec(),
                    class,
                }
            } else {
                node
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Feature;

    fn binary_schema(features: usize) -> Arc<Schema> {
        Arc::new(
            Schema::new(
                (0..features).map(|i| Feature::discrete(format!("f{i}"), ["n", "y"])).collect(),
                vec!["a".into(), "b".into()],
            )
            .unwrap(),
        )
    }

    #[test]
    fn gain_ratio_examples() {
        let g = gain_ratio(&[vec![4, 0], vec![0, 4]]);
        assert!((g - 1.0).abs() < 1e-12);
        assert!((split_info(&[vec![4, 0], vec![0, 4]]) - 1.0).abs() < 1e-12);
        assert_eq!(gain_ratio(&[vec![3, 0], vec![5, 0]]), 0.0);
        assert!(gain_ratio(&[vec![2, 2], vec![2, 2]]).abs() < 1e-12);
        assert_eq!(gain_ratio(&[vec![2, 2], vec![0, 0]]), 0.0);
    }

    #[test]
    fn upper_bound_zero_errors() {
        let u = upper_error_bound(0.0, 6.0, 0.25);
        assert!((u - (1.0 - 0.25f64.powf(1.0 / 6.0))).abs() < 1e-15);
        assert_eq!(upper_error_bound(0.0, 0.0, 0.25), 0.0);
    }

    #[test]
    fn binomial_cdf_small_cases() {
        assert!((binomial_cdf(0, 3, 0.5) - 0.125).abs() < 1e-15);
        assert!((binomial_cdf(1, 3, 0.5) - 0.5).abs() < 1e-15);
        assert!((binomial_cdf(3, 3, 0.3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn pure_training_set_is_a_leaf() {
        let s = binary_schema(2);
        let ex = (0..6)
            .map(|i| Example::new(vec![FeatureValue::Discrete(i % 2), FeatureValue::Discrete(0)], 1))
            .collect();
        let ds = Dataset::new("t", s, ex).unwrap();
        let t = train_tree(&ds).unwrap();
        assert!(t.root().is_leaf());
        assert_eq!(t.predict(&ds.examples()[0]), vec![0.0, 1.0]);
    }

    #[test]
    fn perfect_binary_feature() {
        let s = binary_schema(2);
        let ex = (0..8)
            .map(|i| {
                Example::new(
                    vec![FeatureValue::Discrete(usize::from(i % 3 == 0)), FeatureValue::Discrete(i / 4)],
                    i / 4,
                )
            })
            .collect();
        let ds = Dataset::new("t", s, ex).unwrap();
        let t = grow_tree(&ds);
        match t.root() {
            TreeNode::Internal { feature, split: Split::Values(children), .. } => {
                assert_eq!(*feature, 1);
                assert!(children.iter().all(TreeNode::is_leaf));
            }
            other => panic!("unexpected root {other:?}"),
        }
        for e in ds.examples() {
            let p = t.predict(e);
            assert_eq!(p[e.label], 1.0);
        }
    }

    #[test]
    fn threshold_split_uses_midpoint() {
        let s = Arc::new(Schema::new(vec![Feature::continuous("x")], vec!["a".into(), "b".into()]).unwrap());
        let ex = [1.0, 2.0, 3.0, 4.0, 10.0, 11.0, 12.0, 13.0]
            .iter()
            .enumerate()
            .map(|(i, &x)| Example::new(vec![FeatureValue::Real(x)], i / 4))
            .collect();
        let ds = Dataset::new("t", s, ex).unwrap();
        let t = grow_tree(&ds);
        match t.root() {
            TreeNode::Internal { split: Split::Threshold { threshold, .. }, .. } => assert_eq!(*threshold, 7.0),
            other => panic!("unexpected root {other:?}"),
        }
    }

    #[test]
    fn unseen_value_goes_to_heaviest_child() {
        let s = Arc::new(
            Schema::new(vec![Feature::discrete("c", ["r", "g", "b"])], vec!["a".into(), "b".into()]).unwrap(),
        );
        let mut ex: Vec<Example> = (0..6).map(|_| Example::new(vec![FeatureValue::Discrete(0)], 0)).collect();
        ex.extend((0..3).map(|_| Example::new(vec![FeatureValue::Discrete(1)], 1)));
        let ds = Dataset::new("t", s, ex).unwrap();
        let t = grow_tree(&ds);
        assert!(!t.root().is_leaf());
        let probe = Example::new(vec![FeatureValue::Missing], 0);
        assert_eq!(t.predict(&probe), vec![1.0, 0.0]);
        // The empty 'b' branch predicts the parent majority.
        let probe = Example::new(vec![FeatureValue::Discrete(2)], 0);
        assert_eq!(t.predict(&probe), vec![1.0, 0.0]);
    }

    #[test]
    fn pruning_collapses_noise_splits() {
        let s = binary_schema(1);
        // 9 of class a and 1 of class b split 5/5: the split cannot pay for itself.
        let ex = (0..10)
            .map(|i| Example::new(vec![FeatureValue::Discrete(i % 2)], usize::from(i == 9)))
            .collect();
        let ds = Dataset::new("t", s, ex).unwrap();
        let grown = grow_tree(&ds);
        let pruned = prune(grown.root().clone());
        assert!(pruned.is_leaf());
        assert!(pruned.estimated_errors() <= grown.root().estimated_errors() + 1e-12);
    }
}
