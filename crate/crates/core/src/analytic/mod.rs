//! Exact Gaussian-averaged encoded states and the closed-form bounds on
//! their distance from the maximally mixed state.
//!
//! The average state is tracked as a [`PauliVector`]. Each rotation column is
//! a product of per-qubit [`TransferMatrix4`] maps and each entangler layer a
//! [`SignedPermutation`] of Pauli strings.

mod bounds;
mod pauli_vector;
mod transfer;

pub use bounds::{bound_general, bound_ry_layers, bound_warmup, depth_threshold, depth_threshold_real, BoundQuery};
pub use pauli_vector::{pauli_vector_of, PauliVector, PSD_TOL};
pub use transfer::{averaged_rotation_transfer, entangler_transfer, RotationKind, SignedPermutation, TransferMatrix4};

use crate::encoding::{EncodingCircuitSpec, EncodingFamily, GaussianFeatureSpec};
use crate::quantum::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AnalyticOptions {
    /// Drop the signs of entangler permutations. The result is then no longer
    /// the average state; it is only useful for studying the norm argument.
    pub strip_signs: bool,
}

/// Pauli coefficients of `E[ρ(x)]`.
pub fn analytic_average_pauli(spec: &EncodingCircuitSpec, g: &GaussianFeatureSpec) -> Result<PauliVector> {
    analytic_average_pauli_with(spec, g, AnalyticOptions::default())
}

pub fn analytic_average_pauli_with(
    spec: &EncodingCircuitSpec,
    g: &GaussianFeatureSpec,
    opts: AnalyticOptions,
) -> Result<PauliVector> {
    spec.validate()?;
    if g.len() != spec.feature_count() {
        return Err(Error::FeatureLength { expected: spec.feature_count(), got: g.len() });
    }
    let kind = match spec.family {
        EncodingFamily::U3Entangled => RotationKind::U3Zyz,
        EncodingFamily::RyProduct | EncodingFamily::StronglyEntanglingRy => RotationKind::Ry,
    };
    let r = kind.arity();
    let mut pi = PauliVector::zero_state(spec.n);
    for d in 0..spec.depth {
        for j in 0..spec.n {
            let i = spec.feature_index(j, d, 0);
            let t = averaged_rotation_transfer(&g.means()[i..i + r], &g.stds()[i..i + r], kind)?;
            pi.apply_local(j, &t.entries);
        }
        if let Some(layer) = spec.entanglers.get(d) {
            let mut perm = entangler_transfer(layer, spec.n)?;
            if opts.strip_signs {
                perm = perm.strip_signs();
            }
            pi = perm.apply(&pi)?;
        }
    }
    Ok(pi)
}

/// Exact `E[ρ(x)]` for independent Gaussian features.
pub fn analytic_average_state(spec: &EncodingCircuitSpec, g: &GaussianFeatureSpec) -> Result<DensityMatrix> {
    analytic_average_pauli(spec, g)?.to_density()
}
