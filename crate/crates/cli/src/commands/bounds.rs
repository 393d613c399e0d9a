use qenc::analytic::{bound_general, bound_ry_layers, bound_warmup, depth_threshold, BoundQuery};

use super::metadata;
use crate::config::{BoundRow, BoundsConfig, Loaded};
use crate::error::CliResult;
use crate::output::{fmt_opt, fmt_sig, write_csv};

pub const HEADER: [&str; 9] =
    ["n", "D", "sigma", "eps", "bound_warmup", "bound_general", "bound_ry_layers", "depth_threshold", "error"];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BoundValues {
    pub warmup: Option<f64>,
    pub general: Option<f64>,
    pub ry_layers: Option<f64>,
    pub threshold: Option<usize>,
}

/// Bounds need a depth, the threshold needs `eps`; missing inputs leave the
/// corresponding values empty.
pub fn evaluate_row(row: &BoundRow) -> qenc::Result<BoundValues> {
    let mut q = BoundQuery::new(row.n, row.depth.unwrap_or(1), row.sigma)?;
    if let Some(eps) = row.eps {
        q = q.with_eps(eps)?;
    }
    let mut v = BoundValues::default();
    if row.depth.is_some() {
        v.warmup = Some(bound_warmup(&q)?);
        v.general = Some(bound_general(&q)?);
        v.ry_layers = Some(bound_ry_layers(&q)?);
    }
    if row.eps.is_some() {
        v.threshold = Some(depth_threshold(&q)?);
    }
    Ok(v)
}

pub fn run(cfg: &Loaded<BoundsConfig>) -> CliResult<String> {
    let mut failures = 0;
    let table: Vec<Vec<String>> = cfg
        .body
        .queries
        .iter()
        .map(|row| {
            let mut out = vec![
                row.n.to_string(),
                row.depth.map(|d| d.to_string()).unwrap_or_default(),
                fmt_sig(row.sigma),
                fmt_opt(row.eps),
            ];
            match evaluate_row(row) {
                Ok(v) => {
                    out.extend([fmt_opt(v.warmup), fmt_opt(v.general), fmt_opt(v.ry_layers)]);
                    out.push(v.threshold.map(|t| t.to_string()).unwrap_or_default());
                    out.push(String::new());
                }
                Err(e) => {
                    failures += 1;
                    out.extend(std::iter::repeat_n(String::new(), 4));
                    out.push(e.to_string());
                }
            }
            out
        })
        .collect();
    let meta = metadata("bounds", cfg).decide("logarithm", "base 2").decide("threshold_rounding", "ceiling");
    write_csv(&cfg.out, &meta, &HEADER, &table)?;
    Ok(format!("wrote {} rows ({failures} with errors) to {}", table.len(), cfg.out.display()))
}
