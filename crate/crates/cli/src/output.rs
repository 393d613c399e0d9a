//! File writers shared by all commands. CSV files start with `#` comment
//! lines carrying the run metadata; JSON files carry it under `metadata`.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub const SIGNIFICANT_DIGITS: usize = 9;

/// `%.9g`-style formatting: 9 significant digits, trailing zeros dropped,
/// scientific notation outside `[1e−5, 1e9)`.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = SIGNIFICANT_DIGITS - 1;
    let sci = format!("{x:.p$e}");
    let (mant, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exp) {
        let decimals = (p as i32 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mant.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_sig).unwrap_or_default()
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: String,
    pub command: String,
    pub seed: Option<u64>,
    pub config_sha256: String,
    /// The configuration after defaults were filled in.
    pub config: Value,
    /// Conventions the run depends on that are not visible in the config.
    pub decisions: BTreeMap<String, String>,
}

impl Metadata {
    pub fn new(command: &str, seed: Option<u64>, config_sha256: String, config: Value) -> Self {
        Self {
            tool: format!("qenc {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            seed,
            config_sha256,
            config,
            decisions: BTreeMap::new(),
        }
    }

    pub fn decide(mut self, key: &str, value: impl Into<String>) -> Self {
        self.decisions.insert(key.into(), value.into());
        self
    }

    fn comment_lines(&self) -> Vec<String> {
        let mut lines = vec![
            format!("tool: {}", self.tool),
            format!("command: {}", self.command),
            format!("seed: {}", self.seed.map_or("none".to_string(), |s| s.to_string())),
            format!("config_sha256: {}", self.config_sha256),
            format!("config: {}", self.config),
        ];
        lines.extend(self.decisions.iter().map(|(k, v)| format!("{k}: {v}")));
        lines
    }
}

fn write_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Write { path: path.display().to_string(), source }
}

fn ensure_parent(path: &Path) -> CliResult<()> {
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() => fs::create_dir_all(dir).map_err(write_err(path)),
        _ => Ok(()),
    }
}

/// Writes metadata comments, the header and `rows` as RFC-4180 CSV.
pub fn write_csv(path: &Path, meta: &Metadata, header: &[&str], rows: &[Vec<String>]) -> CliResult<()> {
    ensure_parent(path)?;
    let mut buf = Vec::new();
    for line in meta.comment_lines() {
        writeln!(buf, "# {line}").expect("in-memory write");
    }
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        let to_io = |e: csv::Error| CliError::Write { path: path.display().to_string(), source: e.into() };
        w.write_record(header).map_err(to_io)?;
        for row in rows {
            w.write_record(row).map_err(to_io)?;
        }
        w.flush().map_err(write_err(path))?;
    }
    fs::write(path, buf).map_err(write_err(path))
}

/// Writes `{"metadata": …, "result": …}` as pretty JSON.
pub fn write_json(path: &Path, meta: &Metadata, result: &impl Serialize) -> CliResult<()> {
    ensure_parent(path)?;
    let doc = serde_json::json!({ "metadata": meta, "result": result });
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable report");
    text.push('\n');
    fs::write(path, text).map_err(write_err(path))
}

/// `dir/stem_suffix.ext` next to `path`.
pub fn sibling(path: &Path, suffix: &str, ext: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "out".into());
    path.with_file_name(format!("{stem}_{suffix}.{ext}"))
}
