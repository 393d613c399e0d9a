//! Synthetic Gaussian tasks and MNIST ingestion.

mod mnist;
mod synthetic;

pub use mnist::{
    downsample, load_mnist_idx, parse_idx_images, parse_idx_labels, preprocess_mnist, tile_features, IdxError,
    MnistPair, RawMnist, FEATURES as MNIST_FEATURES,
};
pub use synthetic::{generate_dataset, generate_from_specs, synthetic_spec, SyntheticTaskSpec};
