//! TOML experiment configs. Every file names its `kind`, which must match the
//! subcommand; `seed` and `out` may come from the file or the command line
//! but must agree when given in both places. Unknown keys are errors.

use std::path::{Path, PathBuf};

use qenc::encoding::{EncodingCircuitSpec, EncodingFamily};
use qenc::learn::TrainConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    SweepDivergence,
    Train,
    Discriminate,
    Bounds,
    MnistPrep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::SweepDivergence => "sweep-divergence",
            Command::Train => "train",
            Command::Discriminate => "discriminate",
            Command::Bounds => "bounds",
            Command::MnistPrep => "mnist-prep",
        }
    }

    /// Value of the `kind` key expected in the config file.
    pub fn kind(self) -> &'static str {
        match self {
            Command::SweepDivergence => "divergence-sweep",
            Command::Bounds => "bound",
            c => c.name(),
        }
    }

    fn needs_seed(self) -> bool {
        !matches!(self, Command::Bounds | Command::MnistPrep)
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// A parsed config body together with the run-level settings.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub body: T,
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub sha256: String,
}

/// Command-line values that may also be set in the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

pub fn load<T>(path: &Path, command: Command, flags: &Overrides) -> CliResult<Loaded<T>>
where
    T: DeserializeOwned + Validate,
{
    let bytes = std::fs::read(path).map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| config_err(format!("{} is not UTF-8", path.display())))?;
    let (body, seed, out) = parse(&text, command, flags)?;
    Ok(Loaded { body, seed, out, sha256: hex::encode(Sha256::digest(&bytes)) })
}

/// Parses config text; split out of [`load`] so it can be tested without files.
pub fn parse<T>(text: &str, command: Command, flags: &Overrides) -> CliResult<(T, Option<u64>, PathBuf)>
where
    T: DeserializeOwned + Validate,
{
    let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
    match table.remove("kind") {
        Some(toml::Value::String(k)) if k == command.kind() => {}
        Some(toml::Value::String(k)) => {
            return Err(config_err(format!("config kind is `{k}` but `{}` expects `{}`", command.name(), command.kind())))
        }
        Some(_) => return Err(config_err("`kind` must be a string")),
        None => return Err(config_err(format!("missing `kind` (expected `{}`)", command.kind()))),
    }
    let file_seed = match table.remove("seed") {
        None => None,
        Some(toml::Value::Integer(s)) if s >= 0 => Some(s as u64),
        Some(v) => return Err(config_err(format!("`seed` must be a non-negative integer, got {v}"))),
    };
    let file_out = match table.remove("out") {
        None => None,
        Some(toml::Value::String(s)) => Some(PathBuf::from(s)),
        Some(v) => return Err(config_err(format!("`out` must be a path string, got {v}"))),
    };
    let seed = agree("seed", file_seed, flags.seed)?;
    if seed.is_none() && command.needs_seed() {
        return Err(config_err("no seed given; set `seed` in the config or pass --seed"));
    }
    let out = agree("out", file_out, flags.out.clone())?
        .ok_or_else(|| config_err("no output path given; set `out` in the config or pass --out"))?;
    let body: T = toml::Value::Table(table).try_into().map_err(|e: toml::de::Error| config_err(e.to_string()))?;
    body.validate().map_err(config_err)?;
    Ok((body, seed, out))
}

fn agree<V: PartialEq + std::fmt::Debug>(name: &str, file: Option<V>, flag: Option<V>) -> CliResult<Option<V>> {
    match (file, flag) {
        (Some(a), Some(b)) if a != b => {
            Err(config_err(format!("`{name}` is {a:?} in the config but {b:?} on the command line")))
        }
        (a, b) => Ok(a.or(b)),
    }
}

pub trait Validate {
    fn validate(&self) -> Result<(), String>;
}

fn default_sigma() -> f64 {
    0.8
}

fn check_sigma(sigma: f64) -> Result<(), String> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(format!("sigma must be positive, got {sigma}"))
    }
}

fn check_grid(family: EncodingFamily, qubits: &[usize], depths: &[usize]) -> Result<(), String> {
    if qubits.is_empty() || depths.is_empty() {
        return Err("the (n, D) grid is empty".into());
    }
    for &n in qubits {
        for &d in depths {
            EncodingCircuitSpec::for_family(family, n, d).map_err(|e| format!("grid point n={n}, D={d}: {e}"))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: EncodingFamily,
    pub qubits: Vec<usize>,
    pub depths: Vec<usize>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Monte-Carlo samples per grid point.
    #[serde(default = "default_mc_samples")]
    pub samples: usize,
    /// Which synthetic class supplies the feature means.
    #[serde(default)]
    pub class: usize,
}

fn default_mc_samples() -> usize {
    200_000
}

impl Validate for SweepConfig {
    fn validate(&self) -> Result<(), String> {
        check_grid(self.family, &self.qubits, &self.depths)?;
        check_sigma(self.sigma)?;
        if self.samples == 0 {
            return Err("samples must be at least 1".into());
        }
        if self.class > 1 {
            return Err(format!("class must be 0 or 1, got {}", self.class));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncoderConfig {
    pub family: EncodingFamily,
    pub n: usize,
    pub depth: usize,
}

impl EncoderConfig {
    pub fn spec(&self) -> qenc::Result<EncodingCircuitSpec> {
        EncodingCircuitSpec::for_family(self.family, self.n, self.depth)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum DataConfig {
    Synthetic {
        #[serde(default = "default_sigma")]
        sigma: f64,
        #[serde(default = "default_train_per_class")]
        train_per_class: usize,
        #[serde(default = "default_test_per_class")]
        test_per_class: usize,
    },
    Mnist {
        /// Directory holding the four standard IDX files.
        dir: PathBuf,
        #[serde(default = "default_digits")]
        digits: [u8; 2],
    },
}

fn default_train_per_class() -> usize {
    2000
}

fn default_test_per_class() -> usize {
    500
}

fn default_digits() -> [u8; 2] {
    [3, 6]
}

fn check_digits(d: [u8; 2]) -> Result<(), String> {
    if d[0] == d[1] || d[0] > 9 || d[1] > 9 {
        return Err(format!("digits must be two distinct values in 0..=9, got {d:?}"));
    }
    Ok(())
}

/// Optimizer settings; the seed is the run seed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingSection {
    pub batch_size: usize,
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps_adam: f64,
    pub epochs: usize,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let d = TrainConfig::default();
        Self { batch_size: d.batch_size, lr: d.lr, beta1: d.beta1, beta2: d.beta2, eps_adam: d.eps_adam, epochs: d.epochs }
    }
}

impl TrainingSection {
    pub fn with_seed(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            batch_size: self.batch_size,
            lr: self.lr,
            beta1: self.beta1,
            beta2: self.beta2,
            eps_adam: self.eps_adam,
            epochs: self.epochs,
            seed,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QnnSection {
    /// Number of CNOT/Ry blocks; `n + 2` when absent.
    pub layers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainCommandConfig {
    pub encoder: EncoderConfig,
    pub data: DataConfig,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub qnn: QnnSection,
}

impl Validate for TrainCommandConfig {
    fn validate(&self) -> Result<(), String> {
        self.encoder.spec().map_err(|e| e.to_string())?;
        self.training.with_seed(0).validate().map_err(|e| e.to_string())?;
        match &self.data {
            DataConfig::Synthetic { sigma, train_per_class, test_per_class } => {
                check_sigma(*sigma)?;
                if *train_per_class == 0 || *test_per_class == 0 {
                    return Err("per-class sample counts must be at least 1".into());
                }
            }
            DataConfig::Mnist { digits, .. } => check_digits(*digits)?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscriminateConfig {
    pub family: EncodingFamily,
    pub qubits: Vec<usize>,
    pub depths: Vec<usize>,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    #[serde(default = "default_discriminate_per_class")]
    pub per_class: usize,
    /// Draw both classes from the class-0 distribution.
    #[serde(default)]
    pub identical_classes: bool,
}

fn default_discriminate_per_class() -> usize {
    4000
}

impl Validate for DiscriminateConfig {
    fn validate(&self) -> Result<(), String> {
        check_grid(self.family, &self.qubits, &self.depths)?;
        check_sigma(self.sigma)?;
        if self.per_class == 0 {
            return Err("per_class must be at least 1".into());
        }
        Ok(())
    }
}

/// One bounds query. Values are checked per row when the table is built so
/// that a bad row does not stop the others.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundRow {
    pub n: usize,
    pub depth: Option<usize>,
    pub sigma: f64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    #[serde(rename = "query")]
    pub queries: Vec<BoundRow>,
}

impl Validate for BoundsConfig {
    fn validate(&self) -> Result<(), String> {
        if self.queries.is_empty() {
            return Err("no [[query]] rows".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Split {
    Train,
    Test,
}

impl Split {
    pub fn file_prefix(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Test => "t10k",
        }
    }
}

pub fn idx_paths(dir: &Path, split: Split) -> (PathBuf, PathBuf) {
    let p = split.file_prefix();
    (dir.join(format!("{p}-images-idx3-ubyte")), dir.join(format!("{p}-labels-idx1-ubyte")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MnistPrepConfig {
    pub dir: PathBuf,
    pub split: Split,
    #[serde(default = "default_digits")]
    pub digits: [u8; 2],
}

impl Validate for MnistPrepConfig {
    fn validate(&self) -> Result<(), String> {
        check_digits(self.digits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Overrides {
        Overrides::default()
    }

    #[test]
    fn sweep_defaults_and_overrides() {
        let text = "kind = \"divergence-sweep\"\nseed = 4\nout = \"a.csv\"\nfamily = \"ry-product\"\nqubits = [1, 2]\ndepths = [1, 3]\n";
        let (c, seed, out): (SweepConfig, _, _) = parse(text, Command::SweepDivergence, &flags()).unwrap();
        assert_eq!(c.sigma, 0.8);
        assert_eq!(c.samples, 200_000);
        assert_eq!(seed, Some(4));
        assert_eq!(out, PathBuf::from("a.csv"));
        let same = Overrides { seed: Some(4), out: None };
        assert!(parse::<SweepConfig>(text, Command::SweepDivergence, &same).is_ok());
        let clash = Overrides { seed: Some(5), out: None };
        assert!(matches!(parse::<SweepConfig>(text, Command::SweepDivergence, &clash), Err(CliError::Config(_))));
    }

    #[test]
    fn rejects_bad_configs() {
        let base = "seed = 1\nout = \"x\"\nfamily = \"ry-product\"\nqubits = [2]\ndepths = [1]\n";
        let cases = [
            format!("kind = \"train\"\n{base}"),
            base.to_string(),
            format!("kind = \"divergence-sweep\"\n{base}typo = 3\n"),
            "kind = \"divergence-sweep\"\nout = \"x\"\nfamily = \"ry-product\"\nqubits = [2]\ndepths = [1]\n".into(),
            "kind = \"divergence-sweep\"\nseed = 1\nfamily = \"ry-product\"\nqubits = [2]\ndepths = [1]\n".into(),
            format!("kind = \"divergence-sweep\"\n{}", base.replace("[1]", "[]")),
            format!("kind = \"divergence-sweep\"\n{}", base.replace("[2]", "[11]")),
            format!("kind = \"divergence-sweep\"\n{base}sigma = 0.0\n"),
            "kind = \"divergence-sweep\"\nseed = -1\nout = \"x\"\n".into(),
            "not toml ==".into(),
        ];
        for text in &cases {
            let r = parse::<SweepConfig>(text, Command::SweepDivergence, &flags());
            assert!(matches!(r, Err(CliError::Config(_))), "accepted: {text}");
        }
    }

    #[test]
    fn train_config_sections() {
        let text = r#"
kind = "train"
seed = 2
out = "r.json"
[encoder]
family = "strongly-entangling-ry"
n = 4
depth = 1
[data]
source = "synthetic"
train_per_class = 10
[training]
epochs = 3
"#;
        let (c, _, _): (TrainCommandConfig, _, _) = parse(text, Command::Train, &flags()).unwrap();
        assert_eq!(c.training.epochs, 3);
        assert_eq!(c.training.batch_size, 200);
        assert_eq!(c.data, DataConfig::Synthetic { sigma: 0.8, train_per_class: 10, test_per_class: 500 });
        assert_eq!(c.qnn.layers, None);
        let typo = text.replace("epochs = 3", "epoch = 3");
        assert!(parse::<TrainCommandConfig>(&typo, Command::Train, &flags()).is_err());
        let bad_data = text.replace("train_per_class = 10", "train_per_class = 10\ndigits = [1, 2]");
        assert!(parse::<TrainCommandConfig>(&bad_data, Command::Train, &flags()).is_err());
        let mnist = text.replace("source = \"synthetic\"\ntrain_per_class = 10", "source = \"mnist\"\ndir = \"d\"\ndigits = [4, 4]");
        assert!(parse::<TrainCommandConfig>(&mnist, Command::Train, &flags()).is_err());
    }

    #[test]
    fn bounds_rows_are_not_prevalidated() {
        let text = "kind = \"bound\"\nout = \"b.csv\"\n[[query]]\nn = 2\nsigma = -1.0\n";
        let (c, seed, _): (BoundsConfig, _, _) = parse(text, Command::Bounds, &flags()).unwrap();
        assert_eq!(seed, None);
        assert_eq!(c.queries[0].sigma, -1.0);
    }
}
