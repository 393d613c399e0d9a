pub mod bounds;
pub mod discriminate;
pub mod mnist_prep;
pub mod sweep;
pub mod train;

use crate::config::Loaded;
use crate::output::Metadata;

fn metadata<T: serde::Serialize>(command: &str, cfg: &Loaded<T>) -> Metadata {
    let config = serde_json::to_value(&cfg.body).expect("config serializes");
    Metadata::new(command, cfg.seed, cfg.sha256.clone(), config)
}

const FEATURE_LAYOUT: &str = "qubit-major: feature (j*D + d)*r + k drives rotation k of qubit j in column d";
