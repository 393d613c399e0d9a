use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{one_hot_index, LabeledDataset};
use super::qnn::{Circuit, QnnSpec};
use crate::quantum::StateVector;
use crate::rng::SeededStream;
use crate::{Error, Result};

/// Samples per reduction chunk for batch losses and gradients.
pub const GRADIENT_CHUNK: usize = 256;

/// Substreams of the training seed: parameter initialization and per-epoch shuffles.
const INIT_STREAM: u64 = 0;
const SHUFFLE_STREAM: u64 = 1;

/// Numerically stable softmax.
pub fn softmax(h: &[f64]) -> Vec<f64> {
    let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = h.iter().map(|v| (v - max).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| v / z).collect()
}

fn log_sum_exp(h: &[f64]) -> f64 {
    let max = h.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    max + h.iter().map(|v| (v - max).exp()).sum::<f64>().ln()
}

fn ce_for_class(h: &[f64], class: usize) -> f64 {
    (log_sum_exp(h) - h[class]).max(0.0)
}

/// Softmax cross-entropy in nats.
pub fn ce_loss(h: &[f64], y: &[f64]) -> Result<f64> {
    if h.len() != y.len() {
        return Err(Error::DimensionMismatch { expected: h.len(), got: y.len() });
    }
    Ok(ce_for_class(h, one_hot_index(y)?))
}

/// Encoded states with class labels, ready for repeated training passes.
#[derive(Debug, Clone)]
pub struct EncodedDataset {
    pub states: Vec<StateVector>,
    pub labels: Vec<usize>,
    pub num_classes: usize,
}

impl EncodedDataset {
    pub fn from_dataset(data: &LabeledDataset) -> Result<Self> {
        Ok(Self { states: data.encode_all()?, labels: data.labels().to_vec(), num_classes: data.num_classes() })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    fn check(&self, qnn: &QnnSpec) -> Result<()> {
        qnn.validate()?;
        if self.states.is_empty() {
            return Err(Error::Empty("dataset"));
        }
        if self.num_classes != qnn.num_classes() {
            return Err(Error::DimensionMismatch { expected: qnn.num_classes(), got: self.num_classes });
        }
        if let Some(s) = self.states.iter().find(|s| s.num_qubits() != qnn.n) {
            return Err(Error::DimensionMismatch { expected: qnn.n, got: s.num_qubits() });
        }
        Ok(())
    }
}

/// Sum of `f(i)` over `0..count`, computed per fixed-size chunk and combined
/// in chunk order so the result is independent of the thread count.
fn chunked_sum(count: usize, width: usize, f: impl Fn(usize) -> Vec<f64> + Sync) -> Vec<f64> {
    let chunks = count.div_ceil(GRADIENT_CHUNK);
    let partials: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![0.0; width];
            for i in c * GRADIENT_CHUNK..((c + 1) * GRADIENT_CHUNK).min(count) {
                for (a, v) in acc.iter_mut().zip(f(i)) {
                    *a += v;
                }
            }
            acc
        })
        .collect();
    let mut total = vec![0.0; width];
    for p in partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    total
}

/// Mean loss and mean gradient over the samples at `idx`.
fn loss_and_grad(circuit: &Circuit, theta: &[f64], data: &EncodedDataset, idx: &[usize]) -> (f64, Vec<f64>) {
    let p = theta.len();
    let sum = chunked_sum(idx.len(), p + 1, |b| {
        let i = idx[b];
        let (h, jac) = circuit.forward_with_jacobian(theta, data.states[i].amplitudes());
        let class = data.labels[i];
        let mut dl_dh = softmax(&h);
        dl_dh[class] -= 1.0;
        let mut out = Vec::with_capacity(p + 1);
        out.push(ce_for_class(&h, class));
        out.extend(jac.iter().map(|col| col.iter().zip(&dl_dh).map(|(j, g)| j * g).sum::<f64>()));
        out
    });
    let inv = 1.0 / idx.len() as f64;
    (sum[0] * inv, sum[1..].iter().map(|v| v * inv).collect())
}

fn mean_loss(circuit: &Circuit, theta: &[f64], data: &EncodedDataset) -> f64 {
    let sum = chunked_sum(data.len(), 1, |i| {
        vec![ce_for_class(&circuit.forward(theta, data.states[i].amplitudes()), data.labels[i])]
    });
    sum[0] / data.len() as f64
}

/// Batch-averaged `∂L/∂θ` by the parameter-shift rule.
pub fn grad_param_shift(qnn: &QnnSpec, batch: &[(StateVector, Vec<f64>)]) -> Result<Vec<f64>> {
    if batch.is_empty() {
        return Err(Error::Empty("batch"));
    }
    let labels = batch
        .iter()
        .map(|(_, y)| {
            if y.len() != qnn.num_classes() {
                return Err(Error::DimensionMismatch { expected: qnn.num_classes(), got: y.len() });
            }
            one_hot_index(y)
        })
        .collect::<Result<Vec<_>>>()?;
    let data = EncodedDataset {
        states: batch.iter().map(|(s, _)| s.clone()).collect(),
        labels,
        num_classes: qnn.num_classes(),
    };
    data.check(qnn)?;
    let idx: Vec<usize> = (0..data.len()).collect();
    Ok(loss_and_grad(&Circuit::compile(qnn), &qnn.theta, &data, &idx).1)
}

/// Mean cross-entropy of `qnn` over `data`.
pub fn dataset_loss(qnn: &QnnSpec, data: &EncodedDataset) -> Result<f64> {
    data.check(qnn)?;
    Ok(mean_loss(&Circuit::compile(qnn), &qnn.theta, data))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub batch_size: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self { batch_size: 200, lr: 0.02, beta1: 0.9, beta2: 0.999, eps_adam: 1e-8, epochs: 1, seed: 0 }
    }
}

impl TrainConfig {
    /// `lr = 0` is accepted so that a run can be frozen for inspection.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        if self.batch_size == 0 {
            return bad("batch size must be at least 1".into());
        }
        if !(self.lr >= 0.0 && self.lr.is_finite()) {
            return bad(format!("learning rate must be finite and ≥ 0, got {}", self.lr));
        }
        for (name, b) in [("beta1", self.beta1), ("beta2", self.beta2)] {
            if !(b > 0.0 && b < 1.0) {
                return bad(format!("{name} must lie in (0, 1), got {b}"));
            }
        }
        if !(self.eps_adam > 0.0) {
            return bad(format!("eps_adam must be positive, got {}", self.eps_adam));
        }
        if self.epochs == 0 {
            return bad("epochs must be at least 1".into());
        }
        Ok(())
    }

    /// Uniform `[0, 2π)` parameters for `qnn`, derived from this seed.
    pub fn init_theta(&self, qnn: &QnnSpec) -> Vec<f64> {
        qnn.random_theta(&mut SeededStream::new(self.seed).substream(INIT_STREAM))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdamState {
    pub m: Vec<f64>,
    pub v: Vec<f64>,
}

impl AdamState {
    pub fn new(len: usize) -> Self {
        Self { m: vec![0.0; len], v: vec![0.0; len] }
    }
}

/// One bias-corrected Adam update; `step` counts from 1.
pub fn adam_step(theta: &[f64], grad: &[f64], state: &AdamState, cfg: &TrainConfig, step: usize) -> Result<(Vec<f64>, AdamState)> {
    let p = theta.len();
    for len in [grad.len(), state.m.len(), state.v.len()] {
        if len != p {
            return Err(Error::DimensionMismatch { expected: p, got: len });
        }
    }
    if step == 0 {
        return Err(Error::InvalidParameter("Adam steps are counted from 1".into()));
    }
    let bc1 = 1.0 - cfg.beta1.powi(step as i32);
    let bc2 = 1.0 - cfg.beta2.powi(step as i32);
    let mut next = AdamState::new(p);
    let mut out = theta.to_vec();
    for i in 0..p {
        next.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grad[i];
        next.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grad[i] * grad[i];
        let m_hat = next.m[i] / bc1;
        let v_hat = next.v[i] / bc2;
        out[i] -= cfg.lr * m_hat / (v_hat.sqrt() + cfg.eps_adam);
    }
    Ok((out, next))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    /// Mean loss of each minibatch, evaluated before its update.
    pub loss_trace: Vec<f64>,
    pub theta: Vec<f64>,
    /// Mean loss over the whole training set at the final parameters.
    pub final_train_loss: f64,
    pub train_accuracy: f64,
    /// Filled in by callers that evaluate on held-out data.
    pub test_accuracy: Option<f64>,
}

/// Minibatch Adam on the encoded training set, starting from `qnn.theta`.
/// Each epoch shuffles the sample order with its own substream of the seed.
pub fn train(data: &LabeledDataset, qnn: &QnnSpec, cfg: &TrainConfig) -> Result<TrainReport> {
    if data.is_empty() {
        return Err(Error::Empty("training set"));
    }
    train_encoded(&EncodedDataset::from_dataset(data)?, qnn, cfg)
}

pub fn train_encoded(data: &EncodedDataset, qnn: &QnnSpec, cfg: &TrainConfig) -> Result<TrainReport> {
    cfg.validate()?;
    data.check(qnn)?;
    let circuit = Circuit::compile(qnn);
    let shuffles = SeededStream::new(cfg.seed).substream(SHUFFLE_STREAM);
    let mut theta = qnn.theta.clone();
    let mut adam = AdamState::new(theta.len());
    let mut trace = Vec::new();
    let mut step = 0;
    for epoch in 0..cfg.epochs {
        let mut order: Vec<usize> = (0..data.len()).collect();
        shuffles.substream(epoch as u64).shuffle(&mut order);
        for batch in order.chunks(cfg.batch_size) {
            let (loss, grad) = loss_and_grad(&circuit, &theta, data, batch);
            step += 1;
            let (next, state) = adam_step(&theta, &grad, &adam, cfg, step)?;
            theta = next;
            adam = state;
            trace.push(loss);
        }
    }
    let final_qnn = QnnSpec { theta: theta.clone(), ..qnn.clone() };
    Ok(TrainReport {
        loss_trace: trace,
        final_train_loss: mean_loss(&circuit, &theta, data),
        train_accuracy: evaluate_encoded(&final_qnn, data)?,
        theta,
        test_accuracy: None,
    })
}

/// Index of the largest score; ties go to the lowest index.
pub fn argmax(h: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in h.iter().enumerate() {
        if v > h[best] {
            best = i;
        }
    }
    best
}

/// Fraction of samples whose top score matches the label.
pub fn evaluate(qnn: &QnnSpec, data: &LabeledDataset) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::Empty("evaluation set"));
    }
    evaluate_encoded(qnn, &EncodedDataset::from_dataset(data)?)
}

pub fn evaluate_encoded(qnn: &QnnSpec, data: &EncodedDataset) -> Result<f64> {
    data.check(qnn)?;
    let circuit = Circuit::compile(qnn);
    let hits = chunked_sum(data.len(), 1, |i| {
        let h = circuit.forward(&qnn.theta, data.states[i].amplitudes());
        vec![if argmax(&h) == data.labels[i] { 1.0 } else { 0.0 }]
    });
    Ok(hits[0] / data.len() as f64)
}

/// Largest `|∂L/∂θ_i|` of the full-dataset loss over `trials` parameter
/// vectors drawn uniformly from `[0, 2π)`; trial `t` uses substream `t`.
pub fn gradient_probe(data: &LabeledDataset, template: &QnnSpec, trials: usize, seed: u64) -> Result<f64> {
    gradient_probe_encoded(&EncodedDataset::from_dataset(data)?, template, trials, seed)
}

pub fn gradient_probe_encoded(data: &EncodedDataset, template: &QnnSpec, trials: usize, seed: u64) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    data.check(template)?;
    let circuit = Circuit::compile(template);
    let root = SeededStream::new(seed);
    let idx: Vec<usize> = (0..data.len()).collect();
    let mut best: f64 = 0.0;
    for t in 0..trials {
        let theta = template.random_theta(&mut root.substream(t as u64));
        let (_, grad) = loss_and_grad(&circuit, &theta, data, &idx);
        best = grad.iter().fold(best, |m, g| m.max(g.abs()));
    }
    Ok(best)
}
