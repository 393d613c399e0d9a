use serde::Serialize;

use qenc::datasets::{generate_dataset, load_mnist_idx, preprocess_mnist, SyntheticTaskSpec};
use qenc::learn::{evaluate_encoded, train_encoded, EncodedDataset, LabeledDataset, QnnSpec};
use qenc::quantum::{Pauli, PauliString};
use qenc::rng::SeededStream;

use super::{metadata, FEATURE_LAYOUT};
use crate::config::{idx_paths, DataConfig, Loaded, Split, TrainCommandConfig};
use crate::error::CliResult;
use crate::output::{fmt_sig, sibling, write_csv, write_json};

/// Branch of the run seed that datasets are drawn from; branches 0 and 1 are
/// taken by parameter initialization and shuffling.
pub const DATA_STREAM: u64 = 2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainSummary {
    pub train_samples: usize,
    pub test_samples: usize,
    pub parameter_count: usize,
    pub qnn_layers: usize,
    pub steps: usize,
    pub initial_train_loss: f64,
    pub final_train_loss: f64,
    pub train_accuracy: f64,
    pub test_accuracy: f64,
    pub theta: Vec<f64>,
    #[serde(skip)]
    pub loss_trace: Vec<f64>,
}

/// Builds the train and test sets named by the config.
pub fn datasets(cfg: &TrainCommandConfig, seed: u64) -> qenc::Result<(LabeledDataset, LabeledDataset)> {
    let enc = cfg.encoder.spec()?;
    match &cfg.data {
        DataConfig::Synthetic { sigma, train_per_class, test_per_class } => {
            let task = SyntheticTaskSpec { n: enc.n, depth: enc.depth, family: enc.family, sigma: *sigma };
            let root = SeededStream::new(seed).substream(DATA_STREAM);
            Ok((generate_dataset(&task, *train_per_class, &root.substream(0))?, generate_dataset(&task, *test_per_class, &root.substream(1))?))
        }
        DataConfig::Mnist { dir, digits } => {
            let load = |split| {
                let (images, labels) = idx_paths(dir, split);
                preprocess_mnist(&load_mnist_idx(images, labels)?, (digits[0], digits[1]))?.to_dataset(&enc)
            };
            Ok((load(Split::Train)?, load(Split::Test)?))
        }
    }
}

/// Classifier with observables `Z` and `X` on wire 0 and parameters drawn
/// from the seed.
pub fn initial_qnn(cfg: &TrainCommandConfig, seed: u64) -> qenc::Result<QnnSpec> {
    let n = cfg.encoder.n;
    let layers = cfg.qnn.layers.unwrap_or(n + 2);
    let template = QnnSpec::new(n, layers, vec![PauliString::single(n, 0, Pauli::Z), PauliString::single(n, 0, Pauli::X)])?;
    let theta = cfg.training.with_seed(seed).init_theta(&template);
    template.with_theta(theta)
}

pub fn run_training(cfg: &TrainCommandConfig, seed: u64) -> qenc::Result<TrainSummary> {
    let (train_set, test_set) = datasets(cfg, seed)?;
    let qnn = initial_qnn(cfg, seed)?;
    let train_enc = EncodedDataset::from_dataset(&train_set)?;
    let test_enc = EncodedDataset::from_dataset(&test_set)?;
    let initial_train_loss = qenc::learn::dataset_loss(&qnn, &train_enc)?;
    let report = train_encoded(&train_enc, &qnn, &cfg.training.with_seed(seed))?;
    let trained = qnn.clone().with_theta(report.theta.clone())?;
    Ok(TrainSummary {
        train_samples: train_set.len(),
        test_samples: test_set.len(),
        parameter_count: qnn.param_count(),
        qnn_layers: qnn.layers,
        steps: report.loss_trace.len(),
        initial_train_loss,
        final_train_loss: report.final_train_loss,
        train_accuracy: report.train_accuracy,
        test_accuracy: evaluate_encoded(&trained, &test_enc)?,
        theta: report.theta,
        loss_trace: report.loss_trace,
    })
}

/// Writes the JSON report to `out` and the loss trace to `<stem>_loss.csv`.
pub fn run(cfg: &Loaded<TrainCommandConfig>) -> CliResult<String> {
    let seed = cfg.seed.expect("seed checked at load");
    let summary = run_training(&cfg.body, seed)?;
    let mut meta = metadata("train", cfg)
        .decide("feature_layout", FEATURE_LAYOUT)
        .decide("qnn", "U3 column Rz(t[j]) Ry(t[n+j]) Rz(t[2n+j]), then per block: ring CNOT i->i+1 mod n, Ry(t[3n+l*n+j])")
        .decide("observables", "Z and X on wire 0")
        .decide("theta_init", "uniform [0, 2pi) from substream 0 of the seed")
        .decide("shuffle", "epoch e shuffles with substream 1, sub-substream e")
        .decide("loss", "softmax cross-entropy, natural log; trace holds each minibatch loss before its update")
        .decide("argmax_ties", "lowest index");
    meta = match &cfg.body.data {
        DataConfig::Synthetic { .. } => meta.decide("data_streams", "train set substream 2/0, test set substream 2/1"),
        DataConfig::Mnist { .. } => meta
            .decide("mnist_split", "standard train and t10k files")
            .decide("mnist_preprocessing", "7x7 block mean to 4x4, p/255*pi, first digit is class 0")
            .decide("mnist_feature_tiling", "encoder slot i takes feature i mod 16"),
    };
    write_json(&cfg.out, &meta, &summary)?;
    let loss_path = sibling(&cfg.out, "loss", "csv");
    let rows: Vec<Vec<String>> =
        summary.loss_trace.iter().enumerate().map(|(i, &l)| vec![(i + 1).to_string(), fmt_sig(l)]).collect();
    write_csv(&loss_path, &meta, &["step", "loss"], &rows)?;
    Ok(format!(
        "test accuracy {} after {} steps; wrote {} and {}",
        fmt_sig(summary.test_accuracy),
        summary.steps,
        cfg.out.display(),
        loss_path.display()
    ))
}
