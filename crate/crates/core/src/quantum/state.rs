use num_complex::Complex64;

use super::eigen::hermitian_eigenvalues;
use super::gate::{apply_unchecked, GateSpec};
use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::pauli::PauliString;
use crate::{Error, Result};

const NORM_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-8;

/// Pure state of `n` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0⟩^⊗n`
    pub fn zero(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Self { n, amps }
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if index >= 1 << n {
            return Err(Error::InvalidState(format!("basis index {index} out of range for {n} qubits")));
        }
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = ONE;
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm_sqr} is not 1")));
        }
        Ok(Self { n, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// In-place `|ψ⟩ ← U|ψ⟩`.
    pub fn apply(&mut self, gate: &GateSpec) -> Result<()> {
        gate.validate(self.n)?;
        apply_unchecked(&mut self.amps, self.n, gate);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateSpec>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    pub(crate) fn apply_trusted(&mut self, gate: &GateSpec) {
        debug_assert!(gate.validate(self.n).is_ok());
        apply_unchecked(&mut self.amps, self.n, gate);
    }

    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }
}

/// Returns `U|ψ⟩` for the gate embedded on its wires.
pub fn apply_gate(state: &StateVector, gate: &GateSpec) -> Result<StateVector> {
    let mut out = state.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `⟨ψ|P|ψ⟩` for a Pauli string `P`.
pub fn expectation(state: &StateVector, obs: &PauliString) -> Result<f64> {
    if obs.len() != state.n {
        return Err(Error::DimensionMismatch {
            expected: state.n,
            got: obs.len(),
        });
    }
    Ok(expectation_unchecked(&state.amps, obs))
}

fn expectation_unchecked(amps: &[Complex64], obs: &PauliString) -> f64 {
    let act = obs.action();
    if act.flip == 0 && act.sign == 0 {
        return amps.iter().map(|a| a.norm_sqr()).sum::<f64>() * act.y_phase.re;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, a) in amps.iter().enumerate() {
        acc += amps[k ^ act.flip].conj() * act.phase(k) * a;
    }
    acc.re
}

/// Density operator of `n` qubits: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace and positivity (min eigenvalue ≥ −1e−8).
    pub fn new(n: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = 1 << n;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: matrix.rows(),
            });
        }
        let deviation = matrix.hermitian_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (deviation {deviation:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&matrix)?.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { n, matrix })
    }

    /// Trusted constructor for matrices that are density operators by construction.
    pub(crate) fn from_parts(n: usize, mut matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.rows(), 1 << n);
        matrix.hermitize();
        Self { n, matrix }
    }

    pub fn from_state(state: &StateVector) -> Self {
        Self {
            n: state.n,
            matrix: ComplexMatrix::outer(&state.amps, &state.amps),
        }
    }

    /// `I / 2^n`
    pub fn maximally_mixed(n: usize) -> Self {
        let dim = 1 << n;
        Self {
            n,
            matrix: ComplexMatrix::identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.as_slice().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// `Tr(P ρ)`
    pub fn expectation(&self, obs: &PauliString) -> Result<f64> {
        if obs.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: obs.len(),
            });
        }
        let act = obs.action();
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..self.dim() {
            acc += act.phase(k) * self.matrix[(k, k ^ act.flip)];
        }
        Ok(acc.re)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(hermitian_eigenvalues(&self.matrix)?.last().copied().unwrap_or(0.0))
    }

    /// Frobenius norm of `self − other`.
    pub fn frobenius_distance(&self, other: &DensityMatrix) -> Result<f64> {
        Ok(self.matrix.sub(&other.matrix)?.frobenius_norm())
    }
}

pub fn density_from_state(state: &StateVector) -> DensityMatrix {
    DensityMatrix::from_state(state)
}
