use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    Rx,
    Ry,
    Rz,
    /// `U3(a, b, c) = Rz(c) · Ry(b) · Rz(a)`
    U3,
    Cnot,
    Cz,
    PauliX,
    PauliY,
    PauliZ,
}

impl GateKind {
    pub fn angle_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz => 1,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn wire_count(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Cz => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::Rx => "RX",
            GateKind::Ry => "RY",
            GateKind::Rz => "RZ",
            GateKind::U3 => "U3",
            GateKind::Cnot => "CNOT",
            GateKind::Cz => "CZ",
            GateKind::PauliX => "X",
            GateKind::PauliY => "Y",
            GateKind::PauliZ => "Z",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate with its angles (radians) and wires. For two-qubit gates the first
/// wire is the control.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateSpec {
    pub kind: GateKind,
    pub angles: Vec<f64>,
    pub wires: Vec<usize>,
}

impl GateSpec {
    pub fn new(kind: GateKind, angles: Vec<f64>, wires: Vec<usize>) -> Result<Self> {
        let gate = Self { kind, angles, wires };
        gate.check_arity()?;
        Ok(gate)
    }

    pub fn rx(wire: usize, theta: f64) -> Self {
        Self { kind: GateKind::Rx, angles: vec![theta], wires: vec![wire] }
    }

    pub fn ry(wire: usize, theta: f64) -> Self {
        Self { kind: GateKind::Ry, angles: vec![theta], wires: vec![wire] }
    }

    pub fn rz(wire: usize, theta: f64) -> Self {
        Self { kind: GateKind::Rz, angles: vec![theta], wires: vec![wire] }
    }

    pub fn u3(wire: usize, a: f64, b: f64, c: f64) -> Self {
        Self { kind: GateKind::U3, angles: vec![a, b, c], wires: vec![wire] }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cnot, angles: vec![], wires: vec![control, target] }
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Self { kind: GateKind::Cz, angles: vec![], wires: vec![control, target] }
    }

    fn check_arity(&self) -> Result<()> {
        if self.angles.len() != self.kind.angle_count() || self.wires.len() != self.kind.wire_count() {
            return Err(Error::GateArity {
                kind: self.kind.name(),
                expected: self.kind.angle_count(),
                expected_wires: self.kind.wire_count(),
                angles: self.angles.len(),
                wires: self.wires.len(),
            });
        }
        Ok(())
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.check_arity()?;
        if let Some(&wire) = self.wires.iter().find(|&&w| w >= n) {
            return Err(Error::WireOutOfRange { wire, n });
        }
        if self.wires.len() == 2 && self.wires[0] == self.wires[1] {
            return Err(Error::DuplicateWires(self.wires.clone()));
        }
        Ok(())
    }

    /// 2×2 matrix `[[u00, u01], [u10, u11]]` of a single-qubit gate.
    pub fn single_qubit_matrix(&self) -> Option<[[Complex64; 2]; 2]> {
        let c = |re: f64, im: f64| Complex64::new(re, im);
        Some(match self.kind {
            GateKind::Rx => {
                let (s, co) = (self.angles[0] / 2.0).sin_cos();
                [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
            }
            GateKind::Ry => {
                let (s, co) = (self.angles[0] / 2.0).sin_cos();
                [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
            }
            GateKind::Rz => {
                let h = self.angles[0] / 2.0;
                [[Complex64::from_polar(1.0, -h), c(0.0, 0.0)], [c(0.0, 0.0), Complex64::from_polar(1.0, h)]]
            }
            GateKind::U3 => {
                let rz1 = GateSpec::rz(0, self.angles[0]).single_qubit_matrix()?;
                let ry = GateSpec::ry(0, self.angles[1]).single_qubit_matrix()?;
                let rz3 = GateSpec::rz(0, self.angles[2]).single_qubit_matrix()?;
                mul2(&rz3, &mul2(&ry, &rz1))
            }
            GateKind::PauliX => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
            GateKind::PauliY => [[c(0.0, 0.0), c(0.0, -1.0)], [c(0.0, 1.0), c(0.0, 0.0)]],
            GateKind::PauliZ => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(-1.0, 0.0)]],
            GateKind::Cnot | GateKind::Cz => return None,
        })
    }
}

fn mul2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// Bit mask of `wire` in an `n`-qubit basis index (wire 0 is the most significant bit).
#[inline]
pub(crate) fn wire_mask(n: usize, wire: usize) -> usize {
    1 << (n - 1 - wire)
}

pub(crate) fn apply_single(amps: &mut [Complex64], mask: usize, u: &[[Complex64; 2]; 2]) {
    for i in 0..amps.len() {
        if i & mask == 0 {
            let a = amps[i];
            let b = amps[i | mask];
            amps[i] = u[0][0] * a + u[0][1] * b;
            amps[i | mask] = u[1][0] * a + u[1][1] * b;
        }
    }
}

pub(crate) fn apply_ry(amps: &mut [Complex64], mask: usize, theta: f64) {
    let (s, c) = (theta / 2.0).sin_cos();
    for i in 0..amps.len() {
        if i & mask == 0 {
            let a = amps[i];
            let b = amps[i | mask];
            amps[i] = a * c - b * s;
            amps[i | mask] = a * s + b * c;
        }
    }
}

pub(crate) fn apply_rz(amps: &mut [Complex64], mask: usize, theta: f64) {
    let lo = Complex64::from_polar(1.0, -theta / 2.0);
    let hi = lo.conj();
    for (i, a) in amps.iter_mut().enumerate() {
        *a *= if i & mask == 0 { lo } else { hi };
    }
}

pub(crate) fn apply_cnot(amps: &mut [Complex64], control: usize, target: usize) {
    for i in 0..amps.len() {
        if i & control != 0 && i & target == 0 {
            amps.swap(i, i | target);
        }
    }
}

pub(crate) fn apply_cz(amps: &mut [Complex64], a: usize, b: usize) {
    for (i, amp) in amps.iter_mut().enumerate() {
        if i & a != 0 && i & b != 0 {
            *amp = -*amp;
        }
    }
}

/// Applies a validated gate to raw amplitudes of an `n`-qubit register.
pub(crate) fn apply_unchecked(amps: &mut [Complex64], n: usize, gate: &GateSpec) {
    match gate.kind {
        GateKind::Ry => apply_ry(amps, wire_mask(n, gate.wires[0]), gate.angles[0]),
        GateKind::Rz => apply_rz(amps, wire_mask(n, gate.wires[0]), gate.angles[0]),
        GateKind::Cnot => apply_cnot(amps, wire_mask(n, gate.wires[0]), wire_mask(n, gate.wires[1])),
        GateKind::Cz => apply_cz(amps, wire_mask(n, gate.wires[0]), wire_mask(n, gate.wires[1])),
        _ => {
            let u = gate.single_qubit_matrix().expect("single-qubit gate");
            apply_single(amps, wire_mask(n, gate.wires[0]), &u);
        }
    }
}
