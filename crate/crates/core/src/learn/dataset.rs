use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{encode, EncodingCircuitSpec};
use crate::quantum::StateVector;
use crate::{Error, Result};

/// Feature vectors with class labels, tied to the encoder that consumes them.
/// Labels are stored as class indices; [`LabeledDataset::one_hot`] expands them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    spec: EncodingCircuitSpec,
    num_classes: usize,
    features: Vec<Vec<f64>>,
    labels: Vec<usize>,
}

impl LabeledDataset {
    pub fn new(spec: EncodingCircuitSpec, num_classes: usize, features: Vec<Vec<f64>>, labels: Vec<usize>) -> Result<Self> {
        spec.validate()?;
        if num_classes < 2 {
            return Err(Error::InvalidParameter(format!("need at least 2 classes, got {num_classes}")));
        }
        if features.len() != labels.len() {
            return Err(Error::DimensionMismatch { expected: features.len(), got: labels.len() });
        }
        if let Some(f) = features.iter().find(|f| f.len() != spec.feature_count()) {
            return Err(Error::FeatureLength { expected: spec.feature_count(), got: f.len() });
        }
        if let Some(&l) = labels.iter().find(|&&l| l >= num_classes) {
            return Err(Error::InvalidParameter(format!("label {l} out of range for {num_classes} classes")));
        }
        Ok(Self { spec, num_classes, features, labels })
    }

    /// Builds a dataset from one-hot label vectors.
    pub fn from_one_hot(spec: EncodingCircuitSpec, features: Vec<Vec<f64>>, labels: &[Vec<f64>]) -> Result<Self> {
        let k = labels.first().map_or(2, Vec::len);
        let idx = labels
            .iter()
            .map(|y| {
                if y.len() == k {
                    one_hot_index(y)
                } else {
                    Err(Error::DimensionMismatch { expected: k, got: y.len() })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, k, features, idx)
    }

    pub fn spec(&self) -> &EncodingCircuitSpec {
        &self.spec
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn features(&self, i: usize) -> &[f64] {
        &self.features[i]
    }

    pub fn all_features(&self) -> &[Vec<f64>] {
        &self.features
    }

    pub fn label(&self, i: usize) -> usize {
        self.labels[i]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn one_hot(&self, i: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.num_classes];
        y[self.labels[i]] = 1.0;
        y
    }

    pub fn class_counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.num_classes];
        for &l in &self.labels {
            c[l] += 1;
        }
        c
    }

    /// Samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            spec: self.spec.clone(),
            num_classes: self.num_classes,
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
        }
    }

    /// Encoded pure states, in sample order.
    pub fn encode_all(&self) -> Result<Vec<StateVector>> {
        self.features.par_iter().map(|x| encode(&self.spec, x)).collect()
    }
}

/// Index of the single `1` entry; every other entry must be `0`.
pub fn one_hot_index(y: &[f64]) -> Result<usize> {
    let mut found = None;
    for (i, &v) in y.iter().enumerate() {
        if v == 1.0 && found.is_none() {
            found = Some(i);
        } else if v != 0.0 {
            return Err(Error::NotOneHot(y.to_vec()));
        }
    }
    found.ok_or_else(|| Error::NotOneHot(y.to_vec()))
}
