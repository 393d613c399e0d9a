use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::encoding::{sample_features, EncodingCircuitSpec, EncodingFamily, GaussianFeatureSpec};
use crate::learn::LabeledDataset;
use crate::rng::SeededStream;
use crate::{Error, Result};

/// Two-class Gaussian task: class 0 has means `(2π/16)(j−1) mod 2π`, class 1
/// has `(2π/16)(16−j) mod 2π` for features `j = 1..t`, all with the same std.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticTaskSpec {
    pub n: usize,
    pub depth: usize,
    pub family: EncodingFamily,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
}

fn default_sigma() -> f64 {
    0.8
}

impl SyntheticTaskSpec {
    pub fn new(n: usize, depth: usize, family: EncodingFamily) -> Self {
        Self { n, depth, family, sigma: default_sigma() }
    }

    pub fn encoder(&self) -> Result<EncodingCircuitSpec> {
        EncodingCircuitSpec::for_family(self.family, self.n, self.depth)
    }

    pub fn feature_count(&self) -> usize {
        self.n * self.depth * self.family.rotations_per_slot()
    }

    pub fn validate(&self) -> Result<()> {
        self.encoder()?;
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Feature distribution of class `class_id ∈ {0, 1}`.
pub fn synthetic_spec(task: &SyntheticTaskSpec, class_id: usize) -> Result<GaussianFeatureSpec> {
    task.validate()?;
    if class_id > 1 {
        return Err(Error::InvalidParameter(format!("class id must be 0 or 1, got {class_id}")));
    }
    let step = TAU / 16.0;
    let means = (1..=task.feature_count())
        .map(|j| {
            let k = if class_id == 0 { (j - 1) % 16 } else { (16 - j % 16) % 16 };
            step * k as f64
        })
        .collect::<Vec<_>>();
    GaussianFeatureSpec::with_uniform_std(means, task.sigma)
}

/// `per_class` samples from each class distribution, class 0 first. Sample
/// `i` of the output is drawn from substream `i` of `rng`.
pub fn generate_dataset(task: &SyntheticTaskSpec, per_class: usize, rng: &SeededStream) -> Result<LabeledDataset> {
    let specs = [synthetic_spec(task, 0)?, synthetic_spec(task, 1)?];
    generate_from_specs(task.encoder()?, &specs, per_class, rng)
}

/// Balanced dataset with one feature distribution per class.
pub fn generate_from_specs(
    encoder: EncodingCircuitSpec,
    class_specs: &[GaussianFeatureSpec],
    per_class: usize,
    rng: &SeededStream,
) -> Result<LabeledDataset> {
    if per_class == 0 {
        return Err(Error::Empty("class sample count"));
    }
    let mut features = Vec::with_capacity(per_class * class_specs.len());
    let mut labels = Vec::with_capacity(features.capacity());
    for (k, g) in class_specs.iter().enumerate() {
        for m in 0..per_class {
            let i = k * per_class + m;
            features.push(sample_features(g, &mut rng.substream(i as u64)));
            labels.push(k);
        }
    }
    LabeledDataset::new(encoder, class_specs.len(), features, labels)
}
