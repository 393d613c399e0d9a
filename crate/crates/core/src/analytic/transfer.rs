use serde::{Deserialize, Serialize};

use super::pauli_vector::PauliVector;
use crate::encoding::{Entangler, EntanglerKind};
use crate::quantum::{hermitian_eigenvalues, ComplexMatrix};
use crate::{Error, Result};

/// Gaussian-averaged single-qubit rotation acting on `(I, Z, X, Y)` coefficients.
/// Row `a` holds the image of Pauli `a`: `π_out = π_in T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix4 {
    pub entries: [[f64; 4]; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationKind {
    /// One `Ry` angle.
    Ry,
    /// `U3 = Rz(x3) Ry(x2) Rz(x1)`, three angles in application order.
    U3Zyz,
}

impl RotationKind {
    pub fn arity(self) -> usize {
        match self {
            RotationKind::Ry => 1,
            RotationKind::U3Zyz => 3,
        }
    }
}

impl TransferMatrix4 {
    pub fn identity() -> Self {
        let mut entries = [[0.0; 4]; 4];
        for (i, row) in entries.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        Self { entries }
    }

    /// Averaged `Rz`: rotates the X–Y block, damped by `e^{−σ²/2}`.
    pub fn rz(mu: f64, sigma: f64) -> Self {
        let a = (-0.5 * sigma * sigma).exp();
        let (s, c) = mu.sin_cos();
        let mut t = Self::identity();
        t.entries[2] = [0.0, 0.0, a * c, a * s];
        t.entries[3] = [0.0, 0.0, -a * s, a * c];
        t
    }

    /// Averaged `Ry`: rotates the Z–X block, damped by `e^{−σ²/2}`.
    pub fn ry(mu: f64, sigma: f64) -> Self {
        let a = (-0.5 * sigma * sigma).exp();
        let (s, c) = mu.sin_cos();
        let mut t = Self::identity();
        t.entries[1] = [0.0, a * c, a * s, 0.0];
        t.entries[2] = [0.0, -a * s, a * c, 0.0];
        t
    }

    /// `self` applied first, then `other`.
    pub fn then(&self, other: &Self) -> Self {
        let mut out = [[0.0; 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (0..4).map(|k| self.entries[i][k] * other.entries[k][j]).sum();
            }
        }
        Self { entries: out }
    }

    /// Singular values, descending.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut gram = vec![0.0; 16];
        for i in 0..4 {
            for j in 0..4 {
                gram[i * 4 + j] = (0..4).map(|k| self.entries[k][i] * self.entries[k][j]).sum();
            }
        }
        let m = ComplexMatrix::from_real(4, 4, &gram).expect("4x4");
        hermitian_eigenvalues(&m)
            .expect("Gram matrix is symmetric")
            .into_iter()
            .map(|l| l.max(0.0).sqrt())
            .collect()
    }
}

/// Expected Pauli-coefficient map of a rotation whose angles are independent
/// Gaussians `N(mu_k, sigma_k²)`.
pub fn averaged_rotation_transfer(mu: &[f64], sigma: &[f64], kind: RotationKind) -> Result<TransferMatrix4> {
    let k = kind.arity();
    if mu.len() != k || sigma.len() != k {
        return Err(Error::InvalidParameter(format!(
            "{kind:?} takes {k} mean(s) and {k} std(s), got {} and {}",
            mu.len(),
            sigma.len()
        )));
    }
    if sigma.iter().any(|s| !(*s >= 0.0)) {
        return Err(Error::InvalidParameter("standard deviations must be ≥ 0".into()));
    }
    Ok(match kind {
        RotationKind::Ry => TransferMatrix4::ry(mu[0], sigma[0]),
        RotationKind::U3Zyz => TransferMatrix4::rz(mu[0], sigma[0])
            .then(&TransferMatrix4::ry(mu[1], sigma[1]))
            .then(&TransferMatrix4::rz(mu[2], sigma[2])),
    })
}

/// Conjugation `G (P_a ⊗ P_b) G†` for CNOT (control on the first factor),
/// as `(image index, sign)` over two-letter indices `4a + b` in `I, Z, X, Y` order.
const CNOT_TABLE: [(usize, i8); 16] = [
    (0, 1),   // II → II
    (5, 1),   // IZ → ZZ
    (2, 1),   // IX → IX
    (7, 1),   // IY → ZY
    (4, 1),   // ZI → ZI
    (1, 1),   // ZZ → IZ
    (6, 1),   // ZX → ZX
    (3, 1),   // ZY → IY
    (10, 1),  // XI → XX
    (15, -1), // XZ → −YY
    (8, 1),   // XX → XI
    (13, 1),  // XY → YZ
    (14, 1),  // YI → YX
    (11, 1),  // YZ → XY
    (12, 1),  // YX → YI
    (9, -1),  // YY → −XZ
];

const CZ_TABLE: [(usize, i8); 16] = [
    (0, 1),   // II → II
    (1, 1),   // IZ → IZ
    (6, 1),   // IX → ZX
    (7, 1),   // IY → ZY
    (4, 1),   // ZI → ZI
    (5, 1),   // ZZ → ZZ
    (2, 1),   // ZX → IX
    (3, 1),   // ZY → IY
    (9, 1),   // XI → XZ
    (8, 1),   // XZ → XI
    (15, 1),  // XX → YY
    (14, -1), // XY → −YX
    (13, 1),  // YI → YZ
    (12, 1),  // YZ → YI
    (11, -1), // YX → −XY
    (10, 1),  // YY → XX
];

pub(crate) fn two_qubit_table(kind: EntanglerKind) -> &'static [(usize, i8); 16] {
    match kind {
        EntanglerKind::Cnot => &CNOT_TABLE,
        EntanglerKind::Cz => &CZ_TABLE,
    }
}

/// Signed permutation of Pauli-string coefficients: string `s` is sent to
/// `target[s]` with factor `sign[s]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    n: usize,
    target: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn identity(n: usize) -> Self {
        let len = 1usize << (2 * n);
        Self { n, target: (0..len).collect(), sign: vec![1; len] }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.target.len()
    }

    pub fn is_empty(&self) -> bool {
        self.target.is_empty()
    }

    pub fn target(&self, s: usize) -> usize {
        self.target[s]
    }

    pub fn sign(&self, s: usize) -> i8 {
        self.sign[s]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        if next.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: next.n });
        }
        let target = self.target.iter().map(|&t| next.target[t]).collect();
        let sign = self.target.iter().zip(&self.sign).map(|(&t, &s)| s * next.sign[t]).collect();
        Ok(Self { n: self.n, target, sign })
    }

    pub fn inverse(&self) -> Self {
        let mut target = vec![0; self.len()];
        let mut sign = vec![1; self.len()];
        for (s, (&t, &g)) in self.target.iter().zip(&self.sign).enumerate() {
            target[t] = s;
            sign[t] = g;
        }
        Self { n: self.n, target, sign }
    }

    /// Same permutation with every sign set to `+1`.
    pub fn strip_signs(&self) -> Self {
        Self { n: self.n, target: self.target.clone(), sign: vec![1; self.len()] }
    }

    pub fn is_bijection(&self) -> bool {
        let mut seen = vec![false; self.len()];
        for &t in &self.target {
            if t >= seen.len() || std::mem::replace(&mut seen[t], true) {
                return false;
            }
        }
        true
    }

    pub fn apply(&self, v: &PauliVector) -> Result<PauliVector> {
        if v.num_qubits() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: v.num_qubits() });
        }
        let mut out = vec![0.0; self.len()];
        for (s, &c) in v.coeffs().iter().enumerate() {
            out[self.target[s]] += f64::from(self.sign[s]) * c;
        }
        PauliVector::new(self.n, out)
    }

    fn push_gate(&mut self, e: &Entangler) {
        let table = two_qubit_table(e.kind);
        let sc = 2 * (self.n - 1 - e.control);
        let st = 2 * (self.n - 1 - e.target);
        for (t, g) in self.target.iter_mut().zip(self.sign.iter_mut()) {
            let a = (*t >> sc) & 3;
            let b = (*t >> st) & 3;
            let (img, sign) = table[4 * a + b];
            let cleared = *t & !(3 << sc) & !(3 << st);
            *t = cleared | ((img >> 2) << sc) | ((img & 3) << st);
            *g *= sign;
        }
    }
}

/// Signed permutation induced by conjugating with the layer's gates in order.
pub fn entangler_transfer(layer: &[Entangler], n: usize) -> Result<SignedPermutation> {
    let mut p = SignedPermutation::identity(n);
    for e in layer {
        e.validate(n)?;
        p.push_gate(e);
    }
    Ok(p)
}
