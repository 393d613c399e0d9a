//! Optimal discrimination between class-average encoded states.

use crate::encoding::average_pure_states;
use crate::learn::LabeledDataset;
use crate::quantum::{hermitian_eigen, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// POVM tolerance on positivity and completeness.
pub const POVM_TOL: f64 = 1e-9;

/// Per-class mean states of a labelled dataset.
#[derive(Debug, Clone)]
pub struct ClassEnsemble {
    pub states: Vec<DensityMatrix>,
    pub counts: Vec<usize>,
}

impl ClassEnsemble {
    pub fn num_classes(&self) -> usize {
        self.states.len()
    }
}

/// Mean encoded state of each class.
pub fn class_average_states(data: &LabeledDataset) -> Result<ClassEnsemble> {
    let n = data.spec().n;
    let mut members = vec![Vec::new(); data.num_classes()];
    for (i, &l) in data.labels().iter().enumerate() {
        members[l].push(i);
    }
    if let Some(k) = members.iter().position(Vec::is_empty) {
        return Err(Error::EmptyClass(k));
    }
    let states = members
        .iter()
        .map(|idx| average_pure_states(n, idx.len(), |m| crate::encoding::encode(data.spec(), data.features(idx[m]))))
        .collect::<Result<Vec<_>>>()?;
    Ok(ClassEnsemble { states, counts: members.iter().map(Vec::len).collect() })
}

/// Positive operators `Π_k` summing to the identity.
#[derive(Debug, Clone)]
pub struct Measurement {
    pub operators: Vec<ComplexMatrix>,
}

impl Measurement {
    pub fn validate(&self) -> Result<()> {
        let dim = self.operators.first().map(ComplexMatrix::rows).ok_or(Error::Empty("measurement"))?;
        let mut total = ComplexMatrix::zeros(dim, dim);
        for op in &self.operators {
            let eig = hermitian_eigen(op)?;
            let min = eig.values.last().copied().unwrap_or(0.0);
            if min < -POVM_TOL {
                return Err(Error::InvalidState(format!("POVM element has eigenvalue {min:e}")));
            }
            total = total.add(op)?;
        }
        let dev = total.sub(&ComplexMatrix::identity(dim))?.frobenius_norm();
        if dev > POVM_TOL {
            return Err(Error::InvalidState(format!("POVM elements sum to identity only within {dev:e}")));
        }
        Ok(())
    }

    /// `(1/K) Σ_k Tr(Π_k ρ_k)` with uniform priors.
    pub fn success_probability(&self, states: &[DensityMatrix]) -> Result<f64> {
        if states.len() != self.operators.len() {
            return Err(Error::DimensionMismatch { expected: self.operators.len(), got: states.len() });
        }
        let mut acc = 0.0;
        for (op, rho) in self.operators.iter().zip(states) {
            acc += op.matmul(rho.matrix())?.trace().re;
        }
        Ok(acc / states.len() as f64)
    }
}

/// Optimal equal-prior success probability `½ + ¼‖ρ0 − ρ1‖_tr` and the
/// measurement attaining it. Zero eigenvalues of `ρ0 − ρ1` go to `Π_0`.
pub fn helstrom_binary(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<(f64, Measurement)> {
    if rho0.num_qubits() != rho1.num_qubits() {
        return Err(Error::DimensionMismatch { expected: rho0.num_qubits(), got: rho1.num_qubits() });
    }
    let mut diff = rho0.matrix().sub(rho1.matrix())?;
    diff.hermitize();
    let eig = hermitian_eigen(&diff)?;
    let trace_norm: f64 = eig.values.iter().map(|v| v.abs()).sum();
    let pi0 = eig.map_values(|v| if v >= 0.0 { 1.0 } else { 0.0 });
    let pi1 = ComplexMatrix::identity(rho0.dim()).sub(&pi0)?;
    Ok((0.5 + 0.25 * trace_norm, Measurement { operators: vec![pi0, pi1] }))
}

/// Optimal success probability for an ensemble; only `K = 2` is supported.
pub fn optimal_success(ensemble: &ClassEnsemble) -> Result<(f64, Measurement)> {
    match ensemble.states.as_slice() {
        [a, b] => helstrom_binary(a, b),
        s => Err(Error::UnsupportedClassCount(s.len())),
    }
}

/// Upper bound `1/K + ε` on the success probability once every class average
/// is within `ε` of the maximally mixed state.
pub fn psucc_bound(k: usize, eps: f64) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!("need K ≥ 2, got {k}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    Ok(1.0 / k as f64 + eps)
}
