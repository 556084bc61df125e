use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::data::EncodedExample;
use crate::seed::SeedPath;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// 0 connects inputs directly to outputs.
    pub hidden_units: usize,
    pub epochs: usize,
    pub learning_rate: f64,
    pub momentum: f64,
    pub init_half_range: f64,
}

impl NetworkConfig {
    pub fn new(hidden_units: usize, epochs: usize) -> Self {
        NetworkConfig {
            hidden_units,
            epochs,
            ..NetworkConfig::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidArgument(format!("learning rate {} must be positive", self.learning_rate)));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::InvalidArgument(format!("momentum {} outside [0,1)", self.momentum)));
        }
        if self.epochs == 0 {
            return Err(Error::InvalidArgument("epochs must be at least 1".into()));
        }
        if !(self.init_half_range >= 0.0 && self.init_half_range.is_finite()) {
            return Err(Error::InvalidArgument("initial weight range must be non-negative".into()));
        }
        Ok(())
    }
}

impl Default for NetworkConfig {
    fn default() -> Self {
        NetworkConfig {
            hidden_units: 5,
            epochs: 30,
            learning_rate: 0.15,
            momentum: 0.9,
            init_half_range: 0.5,
        }
    }
}

/// A sigmoid network with at most one hidden layer.
///
/// Parameters live in one flat vector: the hidden layer rows (each `inputs`
/// weights then a bias) followed by the output layer rows (each `hidden`
/// weights, or `inputs` when there is no hidden layer, then a bias).
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkModel {
    inputs: usize,
    hidden: usize,
    outputs: usize,
    params: Vec<f64>,
}

pub fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl NetworkModel {
    pub fn zeros(inputs: usize, hidden: usize, outputs: usize) -> Self {
        let n = param_count(inputs, hidden, outputs);
        NetworkModel {
            inputs,
            hidden,
            outputs,
            params: vec![0.0; n],
        }
    }

    /// Weights uniform in `[-half_range, half_range]`.
    pub fn random(inputs: usize, hidden: usize, outputs: usize, half_range: f64, seed: u64) -> Self {
        let mut m = NetworkModel::zeros(inputs, hidden, outputs);
        let mut rng = crate::seed::rng(seed);
        for w in &mut m.params {
            *w = if half_range > 0.0 {
                rng.random_range(-half_range..=half_range)
            } else {
                0.0
            };
        }
        m
    }

    pub fn from_params(inputs: usize, hidden: usize, outputs: usize, params: Vec<f64>) -> Result<Self> {
        let n = param_count(inputs, hidden, outputs);
        if params.len() != n {
            return Err(Error::Dimension(format!("{} parameters, expected {n}", params.len())));
        }
        Ok(NetworkModel {
            inputs,
            hidden,
            outputs,
            params,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn hidden(&self) -> usize {
        self.hidden
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    fn output_fan_in(&self) -> usize {
        if self.hidden == 0 {
            self.inputs
        } else {
            self.hidden
        }
    }

    fn output_offset(&self) -> usize {
        if self.hidden == 0 {
            0
        } else {
            self.hidden * (self.inputs + 1)
        }
    }

    /// Fills `hidden` (empty without a hidden layer) and `out` activations.
    fn forward_into(&self, x: &[f64], hidden: &mut Vec<f64>, out: &mut Vec<f64>) {
        hidden.clear();
        out.clear();
        let stride = self.inputs + 1;
        for h in 0..self.hidden {
            let row = &self.params[h * stride..(h + 1) * stride];
            let z = row[self.inputs] + dot(&row[..self.inputs], x);
            hidden.push(sigmoid(z));
        }
        let feed: &[f64] = if self.hidden == 0 { x } else { hidden };
        let fan = self.output_fan_in();
        let base = self.output_offset();
        for o in 0..self.outputs {
            let row = &self.params[base + o * (fan + 1)..base + (o + 1) * (fan + 1)];
            out.push(sigmoid(row[fan] + dot(&row[..fan], feed)));
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        let (mut h, mut o) = (Vec::new(), Vec::new());
        self.forward_into(x, &mut h, &mut o);
        o
    }

    /// Per-class scores: the output activations, or `(1 - o, o)` for a
    /// single output unit.
    pub fn scores(&self, x: &[f64]) -> Vec<f64> {
        let o = self.forward(x);
        if o.len() == 1 {
            vec![1.0 - o[0], o[0]]
        } else {
            o
        }
    }

    /// Squared error `0.5 * sum (o - t)^2`.
    pub fn loss(&self, x: &[f64], target: &[f64]) -> f64 {
        self.forward(x)
            .iter()
            .zip(target)
            .map(|(o, t)| 0.5 * (o - t) * (o - t))
            .sum()
    }

    /// Gradient of [`NetworkModel::loss`] with respect to every parameter.
    pub fn gradient(&self, x: &[f64], target: &[f64]) -> Vec<f64> {
        let mut g = vec![0.0; self.params.len()];
        let mut scratch = Scratch::default();
        self.gradient_into(x, target, &mut g, &mut scratch);
        g
    }

    fn gradient_into(&self, x: &[f64], target: &[f64], g: &mut [f64], s: &mut Scratch) {
        self.forward_into(x, &mut s.hidden, &mut s.out);
        s.delta_out.clear();
        s.delta_out
            .extend(s.out.iter().zip(target).map(|(&o, &t)| (o - t) * o * (1.0 - o)));
        let fan = self.output_fan_in();
        let base = self.output_offset();
        let feed: &[f64] = if self.hidden == 0 { x } else { &s.hidden };
        for (o, &d) in s.delta_out.iter().enumerate() {
            let row = &mut g[base + o * (fan + 1)..base + (o + 1) * (fan + 1)];
            for (gw, &a) in row[..fan].iter_mut().zip(feed) {
                *gw = d * a;
            }
            row[fan] = d;
        }
        if self.hidden == 0 {
            return;
        }
        let stride = self.inputs + 1;
        for h in 0..self.hidden {
            let back: f64 = s
                .delta_out
                .iter()
                .enumerate()
                .map(|(o, &d)| d * self.params[base + o * (fan + 1) + h])
                .sum();
            let a = s.hidden[h];
            let d = back * a * (1.0 - a);
            let row = &mut g[h * stride..(h + 1) * stride];
            for (gw, &xi) in row[..self.inputs].iter_mut().zip(x) {
                *gw = d * xi;
            }
            row[self.inputs] = d;
        }
    }

    /// Dimensions line then one parameter per line, 17 significant digits.
    pub fn dump(&self) -> String {
        let mut out = format!("network {} {} {}\n", self.inputs, self.hidden, self.outputs);
        for w in &self.params {
            let _ = writeln!(out, "{w:.16e}");
        }
        out
    }
}

#[derive(Default)]
struct Scratch {
    hidden: Vec<f64>,
    out: Vec<f64>,
    delta_out: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn param_count(inputs: usize, hidden: usize, outputs: usize) -> usize {
    if hidden == 0 {
        outputs * (inputs + 1)
    } else {
        hidden * (inputs + 1) + outputs * (hidden + 1)
    }
}

/// Online backpropagation with momentum from a seeded random start.
pub fn train_network(train: &[&EncodedExample], config: &NetworkConfig, seed: u64) -> Result<NetworkModel> {
    let first = train
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty training set".into()))?;
    let (inputs, outputs) = (first.inputs.len(), first.target.len());
    let path = SeedPath::new(seed);
    let model = NetworkModel::random(
        inputs,
        config.hidden_units,
        outputs,
        config.init_half_range,
        path.with("init").seed(),
    );
    train_from(model, train, config, path.with("order").seed())
}

/// Continues training `model` for `config.epochs` passes.
pub fn train_from(
    mut model: NetworkModel,
    train: &[&EncodedExample],
    config: &NetworkConfig,
    seed: u64,
) -> Result<NetworkModel> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::InvalidArgument("empty training set".into()));
    }
    if config.hidden_units != model.hidden {
        return Err(Error::Dimension(format!(
            "model has {} hidden units, config {}",
            model.hidden, config.hidden_units
        )));
    }
    for (i, e) in train.iter().enumerate() {
        if e.inputs.len() != model.inputs || e.target.len() != model.outputs {
            return Err(Error::Dimension(format!(
                "example {i} has widths {}/{}, network {}/{}",
                e.inputs.len(),
                e.target.len(),
                model.inputs,
                model.outputs
            )));
        }
    }
    let mut rng = crate::seed::rng(seed);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut grad = vec![0.0; model.params.len()];
    let mut velocity = vec![0.0; model.params.len()];
    let mut scratch = Scratch::default();
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let e = train[i];
            model.gradient_into(&e.inputs, &e.target, &mut grad, &mut scratch);
            for ((w, v), g) in model.params.iter_mut().zip(&mut velocity).zip(&grad) {
                *v = -config.learning_rate * g + config.momentum * *v;
                *w += *v;
            }
        }
    }
    Ok(model)
}
