use qenc::datasets::{load_mnist_idx, preprocess_mnist, MnistPair, MNIST_FEATURES};

use super::metadata;
use crate::config::{idx_paths, Loaded, MnistPrepConfig};
use crate::error::CliResult;
use crate::output::{fmt_sig, write_csv};

pub fn load_pair(cfg: &MnistPrepConfig) -> qenc::Result<MnistPair> {
    let (images, labels) = idx_paths(&cfg.dir, cfg.split);
    preprocess_mnist(&load_mnist_idx(images, labels)?, (cfg.digits[0], cfg.digits[1]))
}

/// Writes one row per kept image: class, digit and the 16 reduced features.
pub fn run(cfg: &Loaded<MnistPrepConfig>) -> CliResult<String> {
    let pair = load_pair(&cfg.body)?;
    let mut header = vec!["class".to_string(), "digit".to_string()];
    header.extend((0..MNIST_FEATURES).map(|i| format!("f{i:02}")));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let digits = [pair.digits.0, pair.digits.1];
    let table: Vec<Vec<String>> = pair
        .features
        .iter()
        .zip(&pair.labels)
        .map(|(f, &c)| {
            let mut row = vec![c.to_string(), digits[c].to_string()];
            row.extend(f.iter().map(|&v| fmt_sig(v)));
            row
        })
        .collect();
    let counts = [0, 1].map(|c| pair.labels.iter().filter(|&&l| l == c).count());
    let meta = metadata("mnist-prep", cfg)
        .decide("resize", "7x7 block mean, 28x28 -> 4x4, row-major features")
        .decide("normalization", "pixel mean p maps to p/255*pi")
        .decide("class_assignment", "first digit of the pair is class 0")
        .decide("class_counts", format!("{} / {}", counts[0], counts[1]));
    write_csv(&cfg.out, &meta, &header, &table)?;
    Ok(format!("wrote {} images to {}", table.len(), cfg.out.display()))
}
