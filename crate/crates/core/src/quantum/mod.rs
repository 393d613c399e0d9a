//! Dense complex linear algebra and exact statevector simulation.

mod eigen;
mod gate;
mod matrix;
mod pauli;
mod state;

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use gate::{GateKind, GateSpec};
pub use matrix::ComplexMatrix;
pub use pauli::{Pauli, PauliString};
pub use state::{apply_gate, density_from_state, expectation, DensityMatrix, StateVector};

pub(crate) use gate::{apply_cnot, apply_ry, apply_rz};
