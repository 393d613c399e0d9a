use std::f64::consts::PI;
use std::path::Path;

use thiserror::Error;

use crate::encoding::EncodingCircuitSpec;
use crate::learn::LabeledDataset;
use crate::{Error, Result};

pub const IMAGE_MAGIC: u32 = 2051;
pub const LABEL_MAGIC: u32 = 2049;
pub const SIDE: usize = 28;
/// Side length after block averaging.
pub const REDUCED_SIDE: usize = 4;
pub const FEATURES: usize = REDUCED_SIDE * REDUCED_SIDE;

#[derive(Debug, Error)]
pub enum IdxError {
    #[error("{what}: bad magic number {found} (expected {expected})")]
    BadMagic { what: &'static str, expected: u32, found: u32 },

    #[error("{what}: truncated, expected {expected} bytes but found {actual}")]
    Truncated { what: &'static str, expected: usize, actual: usize },

    #[error("image file holds {images} items but label file holds {labels}")]
    CountMismatch { images: usize, labels: usize },

    #[error("images are {rows}x{cols}, expected 28x28")]
    BadDims { rows: usize, cols: usize },

    #[error("label {0} is not a digit")]
    BadLabel(u8),

    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Raw MNIST split: row-major 28×28 byte images with digit labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawMnist {
    pub images: Vec<Vec<u8>>,
    pub labels: Vec<u8>,
}

impl RawMnist {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}

fn read_u32(bytes: &[u8], offset: usize, what: &'static str) -> std::result::Result<u32, IdxError> {
    bytes
        .get(offset..offset + 4)
        .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
        .ok_or(IdxError::Truncated { what, expected: offset + 4, actual: bytes.len() })
}

/// Parses an IDX image file (magic 2051, 28×28 items).
pub fn parse_idx_images(bytes: &[u8]) -> std::result::Result<Vec<Vec<u8>>, IdxError> {
    let what = "image file";
    let magic = read_u32(bytes, 0, what)?;
    if magic != IMAGE_MAGIC {
        return Err(IdxError::BadMagic { what, expected: IMAGE_MAGIC, found: magic });
    }
    let count = read_u32(bytes, 4, what)? as usize;
    let rows = read_u32(bytes, 8, what)? as usize;
    let cols = read_u32(bytes, 12, what)? as usize;
    if rows != SIDE || cols != SIDE {
        return Err(IdxError::BadDims { rows, cols });
    }
    let expected = 16 + count * rows * cols;
    if bytes.len() < expected {
        return Err(IdxError::Truncated { what, expected, actual: bytes.len() });
    }
    Ok(bytes[16..expected].chunks_exact(rows * cols).map(<[u8]>::to_vec).collect())
}

/// Parses an IDX label file (magic 2049).
pub fn parse_idx_labels(bytes: &[u8]) -> std::result::Result<Vec<u8>, IdxError> {
    let what = "label file";
    let magic = read_u32(bytes, 0, what)?;
    if magic != LABEL_MAGIC {
        return Err(IdxError::BadMagic { what, expected: LABEL_MAGIC, found: magic });
    }
    let count = read_u32(bytes, 4, what)? as usize;
    let expected = 8 + count;
    if bytes.len() < expected {
        return Err(IdxError::Truncated { what, expected, actual: bytes.len() });
    }
    let labels = bytes[8..expected].to_vec();
    if let Some(&bad) = labels.iter().find(|&&l| l > 9) {
        return Err(IdxError::BadLabel(bad));
    }
    Ok(labels)
}

fn read(path: &Path) -> std::result::Result<Vec<u8>, IdxError> {
    std::fs::read(path).map_err(|source| IdxError::Io { path: path.display().to_string(), source })
}

/// Reads a matching pair of IDX image and label files.
pub fn load_mnist_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<RawMnist> {
    let images = parse_idx_images(&read(images_path.as_ref())?)?;
    let labels = parse_idx_labels(&read(labels_path.as_ref())?)?;
    if images.len() != labels.len() {
        return Err(IdxError::CountMismatch { images: images.len(), labels: labels.len() }.into());
    }
    Ok(RawMnist { images, labels })
}

/// 7×7 block means of a 28×28 image, mapped from `[0, 255]` to `[0, π]`.
pub fn downsample(image: &[u8]) -> Vec<f64> {
    let block = SIDE / REDUCED_SIDE;
    let mut out = vec![0.0; FEATURES];
    for (r, row) in image.chunks_exact(SIDE).enumerate() {
        for (c, &p) in row.iter().enumerate() {
            out[(r / block) * REDUCED_SIDE + c / block] += f64::from(p);
        }
    }
    let scale = PI / (255.0 * (block * block) as f64);
    out.iter_mut().for_each(|v| *v *= scale);
    out
}

/// Two-digit subset with 16 features per image; the first digit is class 0.
#[derive(Debug, Clone, PartialEq)]
pub struct MnistPair {
    pub digits: (u8, u8),
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
}

impl MnistPair {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Dataset for `encoder`; slot `i` receives feature `i mod 16`.
    pub fn to_dataset(&self, encoder: &EncodingCircuitSpec) -> Result<LabeledDataset> {
        let t = encoder.feature_count();
        let features = self.features.iter().map(|f| tile_features(f, t)).collect();
        LabeledDataset::new(encoder.clone(), 2, features, self.labels.clone())
    }
}

/// Repeats `f` cyclically (or truncates it) to length `len`.
pub fn tile_features(f: &[f64], len: usize) -> Vec<f64> {
    (0..len).map(|i| f[i % f.len()]).collect()
}

/// Keeps images of the two digits and reduces each to 16 features in `[0, π]`.
pub fn preprocess_mnist(raw: &RawMnist, digits: (u8, u8)) -> Result<MnistPair> {
    let (a, b) = digits;
    if a == b || a > 9 || b > 9 {
        return Err(Error::InvalidParameter(format!("need two distinct digits in 0..=9, got ({a}, {b})")));
    }
    let mut features = Vec::new();
    let mut labels = Vec::new();
    for (img, &l) in raw.images.iter().zip(&raw.labels) {
        let class = if l == a {
            0
        } else if l == b {
            1
        } else {
            continue;
        };
        features.push(downsample(img));
        labels.push(class);
    }
    for (class, d) in [(0, a), (1, b)] {
        if !labels.contains(&class) {
            return Err(Error::InvalidParameter(format!("digit {d} does not occur in the data")));
        }
    }
    Ok(MnistPair { digits, features, labels })
}
