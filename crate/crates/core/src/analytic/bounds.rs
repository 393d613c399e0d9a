use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Inputs to the closed-form concentration bounds. `sigma` is a lower bound on
/// every feature's standard deviation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundQuery {
    pub n: usize,
    pub depth: usize,
    pub sigma: f64,
    /// Only needed by [`depth_threshold`].
    pub eps: Option<f64>,
}

impl BoundQuery {
    pub fn new(n: usize, depth: usize, sigma: f64) -> Result<Self> {
        let q = Self { n, depth, sigma, eps: None };
        q.validate()?;
        Ok(q)
    }

    pub fn with_eps(mut self, eps: f64) -> Result<Self> {
        self.eps = Some(eps);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if self.depth == 0 {
            return Err(Error::InvalidParameter("depth must be at least 1".into()));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", self.sigma)));
        }
        if let Some(eps) = self.eps {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
            }
        }
        Ok(())
    }
}

fn general_with_depth(n: usize, depth: usize, sigma: f64) -> f64 {
    let states = 2f64.powi(n as i32) - 1.0;
    (states * (-(depth as f64) * sigma * sigma).exp()).ln_1p() / LN_2
}

/// `n · log2(1 + e^{−Dσ²})`, the product-encoding bound (tight for uniform σ).
pub fn bound_warmup(q: &BoundQuery) -> Result<f64> {
    q.validate()?;
    Ok(q.n as f64 * general_with_depth(1, q.depth, q.sigma))
}

/// `log2(1 + (2^n − 1) e^{−Dσ²})` for U3 layers with arbitrary entanglers.
pub fn bound_general(q: &BoundQuery) -> Result<f64> {
    q.validate()?;
    Ok(general_with_depth(q.n, q.depth, q.sigma))
}

/// `log2(1 + (2^n − 1) e^{−⌊D/2⌋σ²})`, the weakened bound for layers that
/// only rotate about one axis.
pub fn bound_ry_layers(q: &BoundQuery) -> Result<f64> {
    q.validate()?;
    Ok(general_with_depth(q.n, q.depth / 2, q.sigma))
}

/// Smallest depth with `D ≥ ((n + 4) ln 2 + 2 ln(1/ε)) / σ²`.
pub fn depth_threshold(q: &BoundQuery) -> Result<usize> {
    q.validate()?;
    let eps = q.eps.ok_or_else(|| Error::InvalidParameter("depth threshold needs eps".into()))?;
    Ok(depth_threshold_real(q.n, q.sigma, eps).ceil() as usize)
}

/// Right-hand side of the depth condition before rounding.
pub fn depth_threshold_real(n: usize, sigma: f64, eps: f64) -> f64 {
    ((n as f64 + 4.0) * LN_2 + 2.0 * (1.0 / eps).ln()) / (sigma * sigma)
}
