use num_complex::Complex64;

use crate::quantum::{hermitian_eigenvalues, ComplexMatrix, DensityMatrix, PauliString};
use crate::{Error, Result};

/// Tolerance on the minimum eigenvalue of a reconstructed state.
pub const PSD_TOL: f64 = 1e-9;

/// Real coefficients of a Hermitian operator over all Pauli strings,
/// `ρ = Σ_s coeffs[s] P_s`, indexed as in [`PauliString::from_index`].
#[derive(Debug, Clone, PartialEq)]
pub struct PauliVector {
    n: usize,
    coeffs: Vec<f64>,
}

impl PauliVector {
    pub fn new(n: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != 1 << (2 * n) {
            return Err(Error::DimensionMismatch { expected: 1 << (2 * n), got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    /// `|0…0⟩⟨0…0|`, i.e. `⊗ (1/2, 1/2, 0, 0)`.
    pub fn zero_state(n: usize) -> Self {
        let mut coeffs = vec![0.0; 1 << (2 * n)];
        let amp = 0.5f64.powi(n as i32);
        // strings made only of I and Z: base-4 digits in {0, 1}
        for bits in 0..1usize << n {
            let mut idx = 0;
            for j in 0..n {
                idx = idx * 4 + ((bits >> (n - 1 - j)) & 1);
            }
            coeffs[idx] = amp;
        }
        Self { n, coeffs }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, s: &PauliString) -> f64 {
        self.coeffs[s.index()]
    }

    /// `Tr ρ² = 2^n Σ_s c_s²`
    pub fn purity(&self) -> f64 {
        (1u64 << self.n) as f64 * self.coeffs.iter().map(|c| c * c).sum::<f64>()
    }

    /// Applies a real 4×4 map (row-vector convention) to the coefficients of `wire`.
    pub(crate) fn apply_local(&mut self, wire: usize, t: &[[f64; 4]; 4]) {
        let stride = 1usize << (2 * (self.n - 1 - wire));
        let block = stride * 4;
        for base in (0..self.coeffs.len()).step_by(block) {
            for off in 0..stride {
                let i0 = base + off;
                let v = [
                    self.coeffs[i0],
                    self.coeffs[i0 + stride],
                    self.coeffs[i0 + 2 * stride],
                    self.coeffs[i0 + 3 * stride],
                ];
                for b in 0..4 {
                    self.coeffs[i0 + b * stride] = v[0] * t[0][b] + v[1] * t[1][b] + v[2] * t[2][b] + v[3] * t[3][b];
                }
            }
        }
    }

    /// Dense matrix `Σ_s c_s P_s`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1usize << self.n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (s, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let act = PauliString::from_index(self.n, s).action();
            for k in 0..dim {
                m[(k ^ act.flip, k)] += act.phase(k) * c;
            }
        }
        m
    }

    /// Reconstructs the density matrix, rejecting it unless the minimum
    /// eigenvalue is at least `−1e−9`.
    pub fn to_density(&self) -> Result<DensityMatrix> {
        let m = self.to_matrix();
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-9 || tr.im.abs() > 1e-9 {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = hermitian_eigenvalues(&m)?.last().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        Ok(DensityMatrix::from_parts(self.n, m))
    }
}

/// `coeffs[s] = Tr(P_s ρ) / 2^n`.
pub fn pauli_vector_of(rho: &DensityMatrix) -> PauliVector {
    let n = rho.num_qubits();
    let dim = 1usize << n;
    let m = rho.matrix();
    let scale = 1.0 / dim as f64;
    let coeffs = (0..1usize << (2 * n))
        .map(|s| {
            let act = PauliString::from_index(n, s).action();
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..dim {
                acc += act.phase(k) * m[(k, k ^ act.flip)];
            }
            acc.re * scale
        })
        .collect();
    PauliVector { n, coeffs }
}
