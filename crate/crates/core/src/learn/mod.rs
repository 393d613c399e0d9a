//! Variational quantum classifier: ansatz, softmax cross-entropy,
//! parameter-shift gradients, Adam training and evaluation.

mod dataset;
mod qnn;
mod train;

pub use dataset::{one_hot_index, LabeledDataset};
pub use qnn::{qnn_forward, score_jacobian, QnnSpec};
pub use train::{
    adam_step, argmax, ce_loss, dataset_loss, evaluate, evaluate_encoded, grad_param_shift, gradient_probe,
    gradient_probe_encoded, softmax, train, train_encoded, AdamState, EncodedDataset, TrainConfig, TrainReport,
    GRADIENT_CHUNK,
};
