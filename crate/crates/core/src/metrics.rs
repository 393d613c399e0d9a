//! Divergences and distances between density matrices. Logarithms are base 2.

use crate::quantum::{hermitian_eigen, hermitian_eigenvalues, ComplexMatrix, DensityMatrix};
use crate::{Error, Result};

/// Eigenvalues below this are treated as zero when taking square roots.
pub const EIGEN_CLIP: f64 = 1e-12;

/// Minimum eigenvalue accepted for the reference state of [`petz_renyi2`].
pub const FULL_RANK_TOL: f64 = 1e-10;

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.num_qubits() != sigma.num_qubits() {
        return Err(Error::DimensionMismatch { expected: rho.num_qubits(), got: sigma.num_qubits() });
    }
    Ok(())
}

/// `Tr(A B)` for square matrices of equal size.
fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let d = a.rows();
    let mut acc = 0.0;
    for i in 0..d {
        for j in 0..d {
            acc += (a[(i, j)] * b[(j, i)]).re;
        }
    }
    acc
}

/// Petz–Rényi-2 divergence to `I/2^n`: `log2(2^n Tr ρ²)`.
pub fn renyi2_vs_mixed(rho: &DensityMatrix) -> f64 {
    (rho.dim() as f64 * rho.purity()).log2()
}

/// `log2 Tr(ρ² σ⁻¹)`. A reference with an eigenvalue below 1e−10 is rejected.
pub fn petz_renyi2(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let eig = hermitian_eigen(sigma.matrix())?;
    let min = eig.values.last().copied().unwrap_or(0.0);
    if min <= FULL_RANK_TOL {
        return Err(Error::SingularReference { min_eigenvalue: min });
    }
    let inv = eig.map_values(|x| 1.0 / x);
    let rho2 = rho.matrix().matmul(rho.matrix())?;
    Ok(trace_of_product(&rho2, &inv).log2())
}

/// `Tr|ρ − σ|`, in `[0, 2]`.
pub fn trace_norm_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let mut diff = rho.matrix().sub(sigma.matrix())?;
    diff.hermitize();
    Ok(hermitian_eigenvalues(&diff)?.iter().map(|x| x.abs()).sum())
}

/// Uhlmann fidelity `(Tr √(√ρ σ √ρ))²`, in `[0, 1]`.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let clip_sqrt = |x: f64| if x > EIGEN_CLIP { x.sqrt() } else { 0.0 };
    let sqrt_rho = hermitian_eigen(rho.matrix())?.map_values(clip_sqrt);
    let mut inner = sqrt_rho.matmul(sigma.matrix())?.matmul(&sqrt_rho)?;
    inner.hermitize();
    let root_trace: f64 = hermitian_eigenvalues(&inner)?.into_iter().map(clip_sqrt).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}
